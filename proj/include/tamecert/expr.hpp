#pragma once

// Hash-consed expression DAG with symbolic differentiation and a compiled
// evaluation tape. Node ids are stable for the lifetime of the process.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tamecert::expr {

enum class Op : std::uint8_t {
  Const,
  S,    // first variable, s in I
  Eta,  // second variable
  T,    // auxiliary integration parameter
  XDer, // k-th derivative of an attached base function x(s)
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow, // integer power, exponent in k
  Exp,
  Sin,
  Cos,
  Log
};

enum class Var { S, Eta };

using NodeId = std::uint32_t;

struct Node {
  Op op = Op::Const;
  NodeId a = 0;
  NodeId b = 0;
  int k = 0;
  double value = 0.0;
};

NodeId constant(double c);
NodeId var_s();
NodeId var_eta();
NodeId var_t();
NodeId xder(int order);
NodeId neg(NodeId a);
NodeId add(NodeId a, NodeId b);
NodeId sub(NodeId a, NodeId b);
NodeId mul(NodeId a, NodeId b);
NodeId div(NodeId a, NodeId b);
NodeId pow(NodeId a, int k);
NodeId unary(Op op, NodeId a);

Node node(NodeId id);

bool is_constant(NodeId id, double *value = nullptr);
bool depends_on(NodeId id, Op leaf);

/// Exact symbolic derivative, memoized per (node, variable).
NodeId diff(NodeId id, Var v);

/// Replaces every Eta leaf by `replacement`.
NodeId substitute_eta(NodeId id, NodeId replacement);

/// Grammar-conforming text; parse(print(e)) reproduces e.
std::string print(NodeId id);

/// Total number of interned nodes (diagnostics).
std::size_t pool_size();

/// Values fed to a tape evaluation.
struct Point {
  double s = 0.0;
  double eta = 0.0;
  double t = 0.0;
  std::span<const double> xjet{}; ///< x^(k)(s), k = 0..max_xder
};

/// Linearized evaluation program for a fixed set of roots. Evaluation is
/// lock-free and safe to run concurrently on one tape.
class Tape {
public:
  Tape() = default;
  explicit Tape(std::span<const NodeId> roots);

  std::size_t roots() const noexcept { return outputs_.size(); }
  int max_xder() const noexcept { return max_xder_; }

  /// Writes one value per root into `out`; throws EvalError on log of a
  /// nonpositive number, division by zero or a non-finite result.
  void eval(const Point &p, std::span<double> out,
            std::vector<double> &scratch) const;

  double eval1(const Point &p) const;

private:
  struct Instr {
    Op op;
    std::uint32_t a, b;
    int k;
    double value;
  };
  std::vector<Instr> code_;
  std::vector<std::uint32_t> outputs_;
  int max_xder_ = -1;
};

} // namespace tamecert::expr
