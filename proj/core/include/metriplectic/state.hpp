#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace metriplectic {

enum class StateClass { Simple, Discrete, Lie, Field1D };

[[nodiscard]] std::string_view to_string(StateClass cls) noexcept;

/// (q, p, S). Systems without a symplectic part (no momentum) leave `p` empty.
struct StateSimple {
  std::vector<double> q;
  std::vector<double> p;
  double S = 0.0;
};

/// (q, p, S_1..S_N).
struct StateDiscrete {
  std::vector<double> q;
  std::vector<double> p;
  std::vector<double> S;
};

/// Coalgebra coordinates mu, advected parameter a (possibly empty), entropy s.
struct StateLie {
  std::vector<double> mu;
  std::vector<double> a;
  double s = 0.0;
};

/// Cell averages of momentum density, mass density and entropy density.
struct StateField1D {
  std::vector<double> m;
  std::vector<double> rho;
  std::vector<double> s;
};

using State = std::variant<StateSimple, StateDiscrete, StateLie, StateField1D>;

[[nodiscard]] StateClass state_class(const State& x) noexcept;

/// Flat coordinate ordering shared by states, gradients and tangents.
///
///   Simple   : q (d), p (d or 0), S (1)
///   Discrete : q (d), p (d), S_1..S_N (N)
///   Lie      : mu (n), a (k), s (1)
///   Field1D  : m (n), rho (n), s (n)   -- three whole-grid blocks in this order
struct Layout {
  StateClass cls = StateClass::Simple;
  std::array<std::size_t, 3> blocks{};

  [[nodiscard]] std::size_t size() const noexcept { return blocks[0] + blocks[1] + blocks[2]; }
  [[nodiscard]] std::size_t offset(std::size_t block) const noexcept;

  static Layout simple(std::size_t d, bool with_momentum = true);
  static Layout discrete(std::size_t d, std::size_t n_entropies);
  static Layout lie(std::size_t algebra_dim, std::size_t rep_dim);
  static Layout field(std::size_t cells);

  bool operator==(const Layout&) const = default;
};

[[nodiscard]] Layout layout_of(const State& x);
[[nodiscard]] std::vector<double> flatten(const State& x);
[[nodiscard]] State unflatten(const Layout& layout, std::span<const double> values);

/// Human-readable coordinate names in layout order (q_1, p_1, S, ...).
[[nodiscard]] std::vector<std::string> coordinate_names(const Layout& layout);

/// Shape and finiteness checks. Throws DimensionMismatch or NonFiniteValue.
void validate(const State& x);

}  // namespace metriplectic
