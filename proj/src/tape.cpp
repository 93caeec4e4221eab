#include "tumorpinn/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace tumorpinn {

Var Tape::leaf(double value) {
  nodes_.push_back(Node{{-1, -1}, {0.0, 0.0}});
  return Var(value, this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::unary(double value, const Var& a, double da) {
  if (a.is_constant()) return Var(value);
  nodes_.push_back(Node{{a.index(), -1}, {da, 0.0}});
  return Var(value, this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::binary(double value, const Var& a, double da, const Var& b, double db) {
  if (a.is_constant()) return unary(value, b, db);
  if (b.is_constant()) return unary(value, a, da);
  nodes_.push_back(Node{{a.index(), b.index()}, {da, db}});
  return Var(value, this, static_cast<std::int32_t>(nodes_.size() - 1));
}

std::vector<double> Tape::adjoints(const Var& output) const {
  std::vector<double> adj(nodes_.size(), 0.0);
  if (output.is_constant()) return adj;
  if (output.tape() != this) throw std::invalid_argument("Tape::adjoints: output belongs to another tape");
  adj[static_cast<std::size_t>(output.index())] = 1.0;
  for (std::size_t i = static_cast<std::size_t>(output.index()) + 1; i-- > 0;) {
    const double a = adj[i];
    if (a == 0.0) continue;
    const Node& n = nodes_[i];
    if (n.parent[0] >= 0) adj[static_cast<std::size_t>(n.parent[0])] += a * n.partial[0];
    if (n.parent[1] >= 0) adj[static_cast<std::size_t>(n.parent[1])] += a * n.partial[1];
  }
  return adj;
}

namespace {

Tape* tape_of(const Var& a, const Var& b) {
  Tape* t = a.tape() ? a.tape() : b.tape();
  if (a.tape() && b.tape() && a.tape() != b.tape()) {
    throw std::invalid_argument("Var: operands live on different tapes");
  }
  return t;
}

}  // namespace

Var operator+(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  const double v = a.value() + b.value();
  return t ? t->binary(v, a, 1.0, b, 1.0) : Var(v);
}

Var operator-(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  const double v = a.value() - b.value();
  return t ? t->binary(v, a, 1.0, b, -1.0) : Var(v);
}

Var operator*(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  const double v = a.value() * b.value();
  return t ? t->binary(v, a, b.value(), b, a.value()) : Var(v);
}

Var operator/(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  const double inv = 1.0 / b.value();
  const double v = a.value() * inv;
  return t ? t->binary(v, a, inv, b, -v * inv) : Var(v);
}

Var operator-(const Var& a) { return a.tape() ? a.tape()->unary(-a.value(), a, -1.0) : Var(-a.value()); }

namespace {

Var apply(const Var& a, double f, double df) { return a.tape() ? a.tape()->unary(f, a, df) : Var(f); }

}  // namespace

Var tanh(const Var& a) {
  const double z = std::tanh(a.value());
  return apply(a, z, 1.0 - z * z);
}

Var abs(const Var& a) { return apply(a, std::abs(a.value()), a.value() < 0.0 ? -1.0 : 1.0); }

Var pow(const Var& a, int n) {
  if (n == 0) return Var(1.0);
  const double x = a.value();
  const double pn1 = std::pow(x, n - 1);
  return apply(a, pn1 * x, n * pn1);
}

Var sin(const Var& a) { return apply(a, std::sin(a.value()), std::cos(a.value())); }
Var cos(const Var& a) { return apply(a, std::cos(a.value()), -std::sin(a.value())); }

Var sqrt(const Var& a) {
  const double s = std::sqrt(a.value());
  return apply(a, s, 0.5 / s);
}

Var log(const Var& a) { return apply(a, std::log(a.value()), 1.0 / a.value()); }

Var exp(const Var& a) {
  const double e = std::exp(a.value());
  return apply(a, e, e);
}

}  // namespace tumorpinn
