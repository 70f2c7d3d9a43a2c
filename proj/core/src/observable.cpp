#include "metriplectic/observable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "metriplectic/error.hpp"

namespace metriplectic {

Gradient::Gradient(Layout layout) : layout_(layout), values_(layout.size(), 0.0) {}

Gradient::Gradient(Layout layout, std::vector<double> values)
    : layout_(layout), values_(std::move(values)) {
  if (values_.size() != layout_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "gradient length does not match its layout");
  }
}

std::span<const double> Gradient::block(std::size_t b, std::string_view what, StateClass c1,
                                        StateClass c2) const {
  if (layout_.cls != c1 && layout_.cls != c2) {
    throw Error(ErrorCode::ArityMismatch, "gradient of a " + std::string(to_string(layout_.cls)) +
                                              " observable has no '" + std::string(what) +
                                              "' block");
  }
  return std::span<const double>(values_).subspan(layout_.offset(b), layout_.blocks[b]);
}

std::span<const double> Gradient::q() const {
  return block(0, "q", StateClass::Simple, StateClass::Discrete);
}
std::span<const double> Gradient::p() const {
  return block(1, "p", StateClass::Simple, StateClass::Discrete);
}
double Gradient::entropy() const { return block(2, "entropy", StateClass::Simple, StateClass::Lie)[0]; }
std::span<const double> Gradient::entropies() const {
  return block(2, "entropies", StateClass::Discrete, StateClass::Field1D);
}
std::span<const double> Gradient::mu() const { return block(0, "mu", StateClass::Lie, StateClass::Lie); }
std::span<const double> Gradient::a() const { return block(1, "a", StateClass::Lie, StateClass::Lie); }
std::span<const double> Gradient::m() const {
  return block(0, "m", StateClass::Field1D, StateClass::Field1D);
}
std::span<const double> Gradient::rho() const {
  return block(1, "rho", StateClass::Field1D, StateClass::Field1D);
}

namespace {

std::span<double> as_mutable(std::span<const double> s) {
  return {const_cast<double*>(s.data()), s.size()};
}

}  // namespace

std::span<double> Gradient::q() { return as_mutable(std::as_const(*this).q()); }
std::span<double> Gradient::p() { return as_mutable(std::as_const(*this).p()); }
double& Gradient::entropy() {
  return as_mutable(block(2, "entropy", StateClass::Simple, StateClass::Lie))[0];
}
std::span<double> Gradient::entropies() { return as_mutable(std::as_const(*this).entropies()); }
std::span<double> Gradient::mu() { return as_mutable(std::as_const(*this).mu()); }
std::span<double> Gradient::a() { return as_mutable(std::as_const(*this).a()); }
std::span<double> Gradient::m() { return as_mutable(std::as_const(*this).m()); }
std::span<double> Gradient::rho() { return as_mutable(std::as_const(*this).rho()); }

Observable::Observable(StateClass cls, ValueFn value, GradientFn gradient, std::string name)
    : cls_(cls), value_(std::move(value)), gradient_(std::move(gradient)), name_(std::move(name)) {
  if (!value_) {
    throw Error(ErrorCode::SpecError, "observable needs a value function");
  }
}

Observable Observable::without_gradient() const { return Observable(cls_, value_, nullptr, name_); }

namespace {

void check_arity(const Observable& obs, const State& x) {
  const StateClass got = state_class(x);
  if (obs.state_class() != got) {
    throw Error(ErrorCode::ArityMismatch,
                "observable" + (obs.name().empty() ? std::string() : " '" + obs.name() + "'") +
                    " is defined on " + std::string(to_string(obs.state_class())) +
                    " states but was given a " + std::string(to_string(got)) + " state");
  }
}

void check_finite(const Gradient& g) {
  const auto v = g.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::NonFiniteValue, "gradient component is not finite", i);
    }
  }
}

}  // namespace

double eval(const Observable& obs, const State& x) {
  check_arity(obs, x);
  return obs.value_(x);
}

double fd_step(double xi) noexcept {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(xi));
}

Gradient fd_gradient(const Observable& obs, const State& x) {
  check_arity(obs, x);
  const Layout layout = layout_of(x);
  std::vector<double> flat = flatten(x);
  Gradient g(layout);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double xi = flat[i];
    const double h = fd_step(xi);
    const double up = xi + h;
    const double down = xi - h;
    flat[i] = up;
    const double f_up = obs.value_(unflatten(layout, flat));
    flat[i] = down;
    const double f_down = obs.value_(unflatten(layout, flat));
    flat[i] = xi;
    // Divide by the representable step actually taken.
    g[i] = (f_up - f_down) / (up - down);
  }
  check_finite(g);
  return g;
}

Gradient grad(const Observable& obs, const State& x) {
  if (!obs.gradient_) {
    return fd_gradient(obs, x);
  }
  check_arity(obs, x);
  Gradient g = obs.gradient_(x);
  if (g.layout() != layout_of(x)) {
    throw Error(ErrorCode::DimensionMismatch, "analytic gradient layout does not match the state");
  }
  check_finite(g);
  return g;
}

Observable coordinate(StateClass cls, std::size_t index, std::string name) {
  return Observable(
      cls,
      [index](const State& x) {
        const auto flat = flatten(x);
        if (index >= flat.size()) {
          throw Error(ErrorCode::DimensionMismatch, "coordinate index out of range", index);
        }
        return flat[index];
      },
      [index](const State& x) {
        Gradient g(layout_of(x));
        if (index >= g.size()) {
          throw Error(ErrorCode::DimensionMismatch, "coordinate index out of range", index);
        }
        g[index] = 1.0;
        return g;
      },
      std::move(name));
}

Observable constant(StateClass cls, double value) {
  return Observable(
      cls, [value](const State&) { return value; },
      [](const State& x) { return Gradient(layout_of(x)); }, "constant");
}

}  // namespace metriplectic
