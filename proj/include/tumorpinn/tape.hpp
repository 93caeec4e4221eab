#pragma once

// Minimal reverse-mode scalar autodiff.
//
// A Var is either a constant (no tape) or a node on a Tape. Every node has at
// most two parents with their local partial derivatives, so one reverse sweep
// over the node array yields the adjoint of every node. The primitive set is
// deliberately closed: + - * /, tanh, abs, integer pow, sin, sqrt, log, exp.

#include <cstdint>
#include <vector>

namespace tumorpinn {

class Tape;

class Var {
 public:
  Var() = default;
  Var(double constant) : value_(constant) {}  // NOLINT: implicit constants are the point

  double value() const { return value_; }
  bool is_constant() const { return tape_ == nullptr; }
  Tape* tape() const { return tape_; }
  std::int32_t index() const { return index_; }

 private:
  friend class Tape;
  Var(double v, Tape* t, std::int32_t i) : value_(v), tape_(t), index_(i) {}

  double value_ = 0.0;
  Tape* tape_ = nullptr;
  std::int32_t index_ = -1;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// New independent variable.
  Var leaf(double value);

  /// Node with one or two parents; constant parents are dropped.
  Var unary(double value, const Var& a, double da);
  Var binary(double value, const Var& a, double da, const Var& b, double db);

  std::size_t size() const { return nodes_.size(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }
  void clear() { nodes_.clear(); }

  /// Reverse sweep seeded with d(output)/d(output) = 1. Returns one adjoint per node.
  std::vector<double> adjoints(const Var& output) const;

 private:
  struct Node {
    std::int32_t parent[2];
    double partial[2];
  };
  std::vector<Node> nodes_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

inline bool operator<(const Var& a, const Var& b) { return a.value() < b.value(); }
inline bool operator>(const Var& a, const Var& b) { return a.value() > b.value(); }

Var tanh(const Var& a);
/// Subderivative at 0 is +1.
Var abs(const Var& a);
Var pow(const Var& a, int n);
Var sin(const Var& a);
Var cos(const Var& a);
Var sqrt(const Var& a);
Var log(const Var& a);
Var exp(const Var& a);

}  // namespace tumorpinn
