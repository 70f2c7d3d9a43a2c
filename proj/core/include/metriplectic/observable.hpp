#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "metriplectic/state.hpp"

namespace metriplectic {

/// Partial derivatives of an observable, one per state coordinate, stored in
/// Layout order. Brackets read it through the named block accessors only.
class Gradient {
 public:
  explicit Gradient(Layout layout);
  Gradient(Layout layout, std::vector<double> values);

  [[nodiscard]] const Layout& layout() const noexcept { return layout_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // Simple / Discrete
  [[nodiscard]] std::span<const double> q() const;
  [[nodiscard]] std::span<const double> p() const;
  // Simple (S) and Lie (s)
  [[nodiscard]] double entropy() const;
  // Discrete (S_1..S_N) and Field1D (s per cell)
  [[nodiscard]] std::span<const double> entropies() const;
  // Lie
  [[nodiscard]] std::span<const double> mu() const;
  [[nodiscard]] std::span<const double> a() const;
  // Field1D
  [[nodiscard]] std::span<const double> m() const;
  [[nodiscard]] std::span<const double> rho() const;

  [[nodiscard]] std::span<double> q();
  [[nodiscard]] std::span<double> p();
  [[nodiscard]] double& entropy();
  [[nodiscard]] std::span<double> entropies();
  [[nodiscard]] std::span<double> mu();
  [[nodiscard]] std::span<double> a();
  [[nodiscard]] std::span<double> m();
  [[nodiscard]] std::span<double> rho();

 private:
  [[nodiscard]] std::span<const double> block(std::size_t b, std::string_view what,
                                              StateClass c1, StateClass c2) const;

  Layout layout_;
  std::vector<double> values_;
};

/// A differentiable scalar function on one state class. Immutable once built.
class Observable {
 public:
  using ValueFn = std::function<double(const State&)>;
  using GradientFn = std::function<Gradient(const State&)>;

  Observable(StateClass cls, ValueFn value, GradientFn gradient = nullptr,
             std::string name = {});

  [[nodiscard]] StateClass state_class() const noexcept { return cls_; }
  [[nodiscard]] bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  /// Same value function, gradient stripped (forces the finite-difference path).
  [[nodiscard]] Observable without_gradient() const;

 private:
  friend double eval(const Observable& obs, const State& x);
  friend Gradient grad(const Observable& obs, const State& x);
  friend Gradient fd_gradient(const Observable& obs, const State& x);

  StateClass cls_;
  ValueFn value_;
  GradientFn gradient_;
  std::string name_;
};

/// F(x). Throws ArityMismatch if the observable is defined on another class.
[[nodiscard]] double eval(const Observable& obs, const State& x);

/// Analytic gradient when available, central differences otherwise.
/// Throws ArityMismatch, or NonFiniteValue with the coordinate index.
[[nodiscard]] Gradient grad(const Observable& obs, const State& x);

/// Central difference gradient with step h_i = eps^(1/3) * max(1, |x_i|).
[[nodiscard]] Gradient fd_gradient(const Observable& obs, const State& x);

[[nodiscard]] double fd_step(double xi) noexcept;

/// x_index in flat layout order; gradient is the unit vector e_index.
[[nodiscard]] Observable coordinate(StateClass cls, std::size_t index, std::string name = {});

[[nodiscard]] Observable constant(StateClass cls, double value);

}  // namespace metriplectic
