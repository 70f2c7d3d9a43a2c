#include "metriplectic/state.hpp"

#include <cmath>
#include <type_traits>

#include "metriplectic/error.hpp"

namespace metriplectic {

std::string_view to_string(StateClass cls) noexcept {
  switch (cls) {
    case StateClass::Simple: return "Simple";
    case StateClass::Discrete: return "Discrete";
    case StateClass::Lie: return "Lie";
    case StateClass::Field1D: return "Field1D";
  }
  return "Unknown";
}

StateClass state_class(const State& x) noexcept {
  return static_cast<StateClass>(x.index());
}

std::size_t Layout::offset(std::size_t block) const noexcept {
  std::size_t off = 0;
  for (std::size_t b = 0; b < block; ++b) {
    off += blocks[b];
  }
  return off;
}

Layout Layout::simple(std::size_t d, bool with_momentum) {
  return {StateClass::Simple, {d, with_momentum ? d : 0, 1}};
}

Layout Layout::discrete(std::size_t d, std::size_t n_entropies) {
  return {StateClass::Discrete, {d, d, n_entropies}};
}

Layout Layout::lie(std::size_t algebra_dim, std::size_t rep_dim) {
  return {StateClass::Lie, {algebra_dim, rep_dim, 1}};
}

Layout Layout::field(std::size_t cells) {
  return {StateClass::Field1D, {cells, cells, cells}};
}

Layout layout_of(const State& x) {
  return std::visit(
      [](const auto& s) -> Layout {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StateSimple>) {
          return {StateClass::Simple, {s.q.size(), s.p.size(), 1}};
        } else if constexpr (std::is_same_v<T, StateDiscrete>) {
          return {StateClass::Discrete, {s.q.size(), s.p.size(), s.S.size()}};
        } else if constexpr (std::is_same_v<T, StateLie>) {
          return {StateClass::Lie, {s.mu.size(), s.a.size(), 1}};
        } else {
          return {StateClass::Field1D, {s.m.size(), s.rho.size(), s.s.size()}};
        }
      },
      x);
}

namespace {

void append(std::vector<double>& out, const std::vector<double>& v) {
  out.insert(out.end(), v.begin(), v.end());
}

std::vector<double> take(std::span<const double> values, std::size_t offset, std::size_t count) {
  return {values.begin() + static_cast<std::ptrdiff_t>(offset),
          values.begin() + static_cast<std::ptrdiff_t>(offset + count)};
}

}  // namespace

std::vector<double> flatten(const State& x) {
  std::vector<double> out;
  out.reserve(layout_of(x).size());
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StateSimple>) {
          append(out, s.q);
          append(out, s.p);
          out.push_back(s.S);
        } else if constexpr (std::is_same_v<T, StateDiscrete>) {
          append(out, s.q);
          append(out, s.p);
          append(out, s.S);
        } else if constexpr (std::is_same_v<T, StateLie>) {
          append(out, s.mu);
          append(out, s.a);
          out.push_back(s.s);
        } else {
          append(out, s.m);
          append(out, s.rho);
          append(out, s.s);
        }
      },
      x);
  return out;
}

State unflatten(const Layout& layout, std::span<const double> values) {
  if (values.size() != layout.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "flat vector of length " + std::to_string(values.size()) +
                    " does not match layout of size " + std::to_string(layout.size()));
  }
  const auto& b = layout.blocks;
  switch (layout.cls) {
    case StateClass::Simple:
      return StateSimple{take(values, 0, b[0]), take(values, b[0], b[1]), values[b[0] + b[1]]};
    case StateClass::Discrete:
      return StateDiscrete{take(values, 0, b[0]), take(values, b[0], b[1]),
                           take(values, b[0] + b[1], b[2])};
    case StateClass::Lie:
      return StateLie{take(values, 0, b[0]), take(values, b[0], b[1]), values[b[0] + b[1]]};
    case StateClass::Field1D:
      return StateField1D{take(values, 0, b[0]), take(values, b[0], b[1]),
                          take(values, b[0] + b[1], b[2])};
  }
  throw Error(ErrorCode::DimensionMismatch, "unknown state class");
}

std::vector<std::string> coordinate_names(const Layout& layout) {
  std::vector<std::string> names;
  names.reserve(layout.size());
  auto block = [&names](std::string_view prefix, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      names.push_back(std::string(prefix) + "_" + std::to_string(i + 1));
    }
  };
  const auto& b = layout.blocks;
  switch (layout.cls) {
    case StateClass::Simple:
      block("q", b[0]);
      block("p", b[1]);
      names.emplace_back("S");
      break;
    case StateClass::Discrete:
      block("q", b[0]);
      block("p", b[1]);
      block("S", b[2]);
      break;
    case StateClass::Lie:
      block("mu", b[0]);
      block("a", b[1]);
      names.emplace_back("s");
      break;
    case StateClass::Field1D:
      block("m", b[0]);
      block("rho", b[1]);
      block("s", b[2]);
      break;
  }
  return names;
}

void validate(const State& x) {
  const Layout layout = layout_of(x);
  const auto& b = layout.blocks;
  auto fail = [](const std::string& what) { throw Error(ErrorCode::DimensionMismatch, what); };
  switch (layout.cls) {
    case StateClass::Simple:
      if (b[0] == 0) fail("simple state needs at least one position coordinate");
      if (b[1] != 0 && b[1] != b[0]) fail("q and p must have equal length");
      break;
    case StateClass::Discrete:
      if (b[0] == 0) fail("discrete state needs at least one position coordinate");
      if (b[1] != b[0]) fail("q and p must have equal length");
      if (b[2] == 0) fail("discrete state needs at least one entropy");
      break;
    case StateClass::Lie:
      if (b[0] == 0) fail("Lie state needs a nonempty coalgebra vector");
      break;
    case StateClass::Field1D:
      if (b[0] != b[1] || b[1] != b[2]) fail("m, rho and s must have equal length");
      if (b[0] < 4) fail("field state needs at least 4 cells");
      break;
  }
  const auto flat = flatten(x);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!std::isfinite(flat[i])) {
      throw Error(ErrorCode::NonFiniteValue, "state coordinate is not finite", i);
    }
  }
  if (const auto* f = std::get_if<StateField1D>(&x)) {
    for (std::size_t i = 0; i < f->rho.size(); ++i) {
      if (!(f->rho[i] > 0.0)) {
        throw Error(ErrorCode::DomainViolation, "mass density must be positive", i);
      }
    }
  }
}

}  // namespace metriplectic
