#include "tamecert/expr.hpp"

#include "tamecert/errors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace tamecert::expr {

namespace {

struct Key {
  Op op;
  NodeId a, b;
  int k;
  std::uint64_t bits;
  bool operator==(const Key &) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key &key) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(key.op);
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(key.a);
    mix(key.b);
    mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.k)));
    mix(key.bits);
    return static_cast<std::size_t>(h);
  }
};

class Pool {
public:
  static Pool &instance() {
    static Pool pool;
    return pool;
  }

  std::recursive_mutex mutex;
  std::deque<Node> nodes;
  std::unordered_map<Key, NodeId, KeyHash> interned;
  std::unordered_map<std::uint64_t, NodeId> derivatives;

  NodeId intern(const Node &n) {
    std::lock_guard lock(mutex);
    Key key{n.op, n.a, n.b, n.k, std::bit_cast<std::uint64_t>(n.value)};
    auto it = interned.find(key);
    if (it != interned.end())
      return it->second;
    auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(n);
    interned.emplace(key, id);
    return id;
  }

  Node get(NodeId id) {
    std::lock_guard lock(mutex);
    return nodes.at(id);
  }
};

Pool &pool() { return Pool::instance(); }

Node make(Op op, NodeId a = 0, NodeId b = 0, int k = 0, double value = 0.0) {
  Node n;
  n.op = op;
  n.a = a;
  n.b = b;
  n.k = k;
  n.value = value;
  return n;
}

double clean(double c) { return c == 0.0 ? 0.0 : c; }

} // namespace

NodeId constant(double c) { return pool().intern(make(Op::Const, 0, 0, 0, clean(c))); }
NodeId var_s() { return pool().intern(make(Op::S)); }
NodeId var_eta() { return pool().intern(make(Op::Eta)); }
NodeId var_t() { return pool().intern(make(Op::T)); }
NodeId xder(int order) { return pool().intern(make(Op::XDer, 0, 0, order)); }

Node node(NodeId id) { return pool().get(id); }

bool is_constant(NodeId id, double *value) {
  Node n = node(id);
  if (n.op != Op::Const)
    return false;
  if (value)
    *value = n.value;
  return true;
}

NodeId neg(NodeId a) {
  double c;
  if (is_constant(a, &c))
    return constant(-c);
  Node n = node(a);
  if (n.op == Op::Neg)
    return n.a;
  return pool().intern(make(Op::Neg, a));
}

NodeId add(NodeId a, NodeId b) {
  double ca, cb;
  bool ka = is_constant(a, &ca), kb = is_constant(b, &cb);
  if (ka && kb)
    return constant(ca + cb);
  if (ka && ca == 0.0)
    return b;
  if (kb && cb == 0.0)
    return a;
  return pool().intern(make(Op::Add, a, b));
}

NodeId sub(NodeId a, NodeId b) {
  double ca, cb;
  bool ka = is_constant(a, &ca), kb = is_constant(b, &cb);
  if (ka && kb)
    return constant(ca - cb);
  if (kb && cb == 0.0)
    return a;
  if (ka && ca == 0.0)
    return neg(b);
  if (a == b)
    return constant(0.0);
  return pool().intern(make(Op::Sub, a, b));
}

NodeId mul(NodeId a, NodeId b) {
  double ca, cb;
  bool ka = is_constant(a, &ca), kb = is_constant(b, &cb);
  if (ka && kb)
    return constant(ca * cb);
  if ((ka && ca == 0.0) || (kb && cb == 0.0))
    return constant(0.0);
  if (ka && ca == 1.0)
    return b;
  if (kb && cb == 1.0)
    return a;
  if (ka && ca == -1.0)
    return neg(b);
  if (kb && cb == -1.0)
    return neg(a);
  return pool().intern(make(Op::Mul, a, b));
}

NodeId div(NodeId a, NodeId b) {
  double ca, cb;
  bool ka = is_constant(a, &ca), kb = is_constant(b, &cb);
  if (ka && kb && cb != 0.0)
    return constant(ca / cb);
  if (ka && ca == 0.0)
    return constant(0.0);
  if (kb && cb == 1.0)
    return a;
  return pool().intern(make(Op::Div, a, b));
}

NodeId pow(NodeId a, int k) {
  if (k == 0)
    return constant(1.0);
  if (k == 1)
    return a;
  double ca;
  if (is_constant(a, &ca) && (ca != 0.0 || k > 0))
    return constant(std::pow(ca, k));
  return pool().intern(make(Op::Pow, a, 0, k));
}

NodeId unary(Op op, NodeId a) {
  double c;
  if (is_constant(a, &c)) {
    switch (op) {
    case Op::Exp:
      return constant(std::exp(c));
    case Op::Sin:
      return constant(std::sin(c));
    case Op::Cos:
      return constant(std::cos(c));
    case Op::Log:
      if (c > 0.0)
        return constant(std::log(c));
      break;
    case Op::Neg:
      return constant(-c);
    default:
      break;
    }
  }
  if (op == Op::Neg)
    return neg(a);
  return pool().intern(make(op, a));
}

bool depends_on(NodeId id, Op leaf) {
  std::lock_guard lock(pool().mutex);
  std::vector<NodeId> stack{id};
  std::vector<bool> seen(pool().nodes.size(), false);
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    if (seen[cur])
      continue;
    seen[cur] = true;
    const Node &n = pool().nodes[cur];
    if (n.op == leaf)
      return true;
    switch (n.op) {
    case Op::Const:
    case Op::S:
    case Op::Eta:
    case Op::T:
    case Op::XDer:
      break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      stack.push_back(n.a);
      stack.push_back(n.b);
      break;
    default:
      stack.push_back(n.a);
      break;
    }
  }
  return false;
}

NodeId diff(NodeId id, Var v) {
  auto &p = pool();
  std::lock_guard lock(p.mutex);
  const std::uint64_t key = (static_cast<std::uint64_t>(id) << 1) |
                            (v == Var::Eta ? 1u : 0u);
  if (auto it = p.derivatives.find(key); it != p.derivatives.end())
    return it->second;

  const Node n = p.nodes[id];
  NodeId r = 0;
  switch (n.op) {
  case Op::Const:
  case Op::T:
    r = constant(0.0);
    break;
  case Op::S:
    r = constant(v == Var::S ? 1.0 : 0.0);
    break;
  case Op::Eta:
    r = constant(v == Var::Eta ? 1.0 : 0.0);
    break;
  case Op::XDer:
    r = v == Var::S ? xder(n.k + 1) : constant(0.0);
    break;
  case Op::Neg:
    r = neg(diff(n.a, v));
    break;
  case Op::Add:
    r = add(diff(n.a, v), diff(n.b, v));
    break;
  case Op::Sub:
    r = sub(diff(n.a, v), diff(n.b, v));
    break;
  case Op::Mul:
    r = add(mul(diff(n.a, v), n.b), mul(n.a, diff(n.b, v)));
    break;
  case Op::Div:
    // (a/b)' = (a' - (a/b) b') / b reuses this node instead of growing b^2.
    r = div(sub(diff(n.a, v), mul(id, diff(n.b, v))), n.b);
    break;
  case Op::Pow:
    r = mul(mul(constant(n.k), pow(n.a, n.k - 1)), diff(n.a, v));
    break;
  case Op::Exp:
    r = mul(id, diff(n.a, v));
    break;
  case Op::Sin:
    r = mul(unary(Op::Cos, n.a), diff(n.a, v));
    break;
  case Op::Cos:
    r = neg(mul(unary(Op::Sin, n.a), diff(n.a, v)));
    break;
  case Op::Log:
    r = div(diff(n.a, v), n.a);
    break;
  }
  p.derivatives.emplace(key, r);
  return r;
}

namespace {

NodeId substitute(NodeId id, NodeId repl,
                  std::unordered_map<NodeId, NodeId> &memo) {
  if (auto it = memo.find(id); it != memo.end())
    return it->second;
  const Node n = node(id);
  NodeId r = id;
  switch (n.op) {
  case Op::Eta:
    r = repl;
    break;
  case Op::Const:
  case Op::S:
  case Op::T:
  case Op::XDer:
    break;
  case Op::Add:
    r = add(substitute(n.a, repl, memo), substitute(n.b, repl, memo));
    break;
  case Op::Sub:
    r = sub(substitute(n.a, repl, memo), substitute(n.b, repl, memo));
    break;
  case Op::Mul:
    r = mul(substitute(n.a, repl, memo), substitute(n.b, repl, memo));
    break;
  case Op::Div:
    r = div(substitute(n.a, repl, memo), substitute(n.b, repl, memo));
    break;
  case Op::Pow:
    r = pow(substitute(n.a, repl, memo), n.k);
    break;
  default:
    r = unary(n.op, substitute(n.a, repl, memo));
    break;
  }
  memo.emplace(id, r);
  return r;
}

int precedence(const Node &n) {
  switch (n.op) {
  case Op::Add:
  case Op::Sub:
    return 1;
  case Op::Mul:
  case Op::Div:
    return 2;
  case Op::Pow:
    return 3;
  default:
    return 4;
  }
}

std::string format_number(double c) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, std::abs(c),
                           std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

std::string print_node(NodeId id);

std::string wrap(NodeId id, bool paren) {
  std::string s = print_node(id);
  return paren ? "(" + s + ")" : s;
}

std::string print_node(NodeId id) {
  const Node n = node(id);
  switch (n.op) {
  case Op::Const:
    if (n.value < 0.0)
      return "(0-" + format_number(n.value) + ")";
    return format_number(n.value);
  case Op::S:
    return "s";
  case Op::Eta:
    return "eta";
  case Op::T:
    return "t";
  case Op::XDer:
    return "x" + std::to_string(n.k);
  case Op::Neg:
    return "(0-" + wrap(n.a, precedence(node(n.a)) <= 1) + ")";
  case Op::Add:
  case Op::Sub:
  case Op::Mul:
  case Op::Div: {
    const int p = precedence(n);
    const bool assoc = n.op == Op::Add || n.op == Op::Mul;
    const int pl = precedence(node(n.a));
    const int pr = precedence(node(n.b));
    const char *sym = n.op == Op::Add   ? "+"
                      : n.op == Op::Sub ? "-"
                      : n.op == Op::Mul ? "*"
                                        : "/";
    return wrap(n.a, pl < p) + sym + wrap(n.b, assoc ? pr < p : pr <= p);
  }
  case Op::Pow:
    return wrap(n.a, precedence(node(n.a)) < 4) + "^" + std::to_string(n.k);
  case Op::Exp:
    return "exp(" + print_node(n.a) + ")";
  case Op::Sin:
    return "sin(" + print_node(n.a) + ")";
  case Op::Cos:
    return "cos(" + print_node(n.a) + ")";
  case Op::Log:
    return "log(" + print_node(n.a) + ")";
  }
  return {};
}

} // namespace

NodeId substitute_eta(NodeId id, NodeId replacement) {
  std::unordered_map<NodeId, NodeId> memo;
  return substitute(id, replacement, memo);
}

std::string print(NodeId id) { return print_node(id); }

std::size_t pool_size() {
  std::lock_guard lock(pool().mutex);
  return pool().nodes.size();
}

Tape::Tape(std::span<const NodeId> roots) {
  auto &p = pool();
  std::lock_guard lock(p.mutex);
  std::vector<NodeId> order;
  std::unordered_map<NodeId, std::uint32_t> slot;
  std::vector<NodeId> stack(roots.begin(), roots.end());
  std::vector<char> seen;
  seen.assign(p.nodes.size(), 0);
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    if (seen[cur])
      continue;
    seen[cur] = 1;
    order.push_back(cur);
    const Node &n = p.nodes[cur];
    switch (n.op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      stack.push_back(n.a);
      stack.push_back(n.b);
      break;
    case Op::Neg:
    case Op::Pow:
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
    case Op::Log:
      stack.push_back(n.a);
      break;
    default:
      break;
    }
  }
  // Children are always interned before their parents.
  std::sort(order.begin(), order.end());
  code_.reserve(order.size());
  for (NodeId id : order) {
    const Node &n = p.nodes[id];
    Instr ins{n.op, 0, 0, n.k, n.value};
    auto lookup = [&slot](NodeId c) { return slot.at(c); };
    switch (n.op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      ins.a = lookup(n.a);
      ins.b = lookup(n.b);
      break;
    case Op::Neg:
    case Op::Pow:
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
    case Op::Log:
      ins.a = lookup(n.a);
      break;
    case Op::XDer:
      max_xder_ = std::max(max_xder_, n.k);
      break;
    default:
      break;
    }
    slot.emplace(id, static_cast<std::uint32_t>(code_.size()));
    code_.push_back(ins);
  }
  outputs_.reserve(roots.size());
  for (NodeId r : roots)
    outputs_.push_back(slot.at(r));
}

void Tape::eval(const Point &p, std::span<double> out,
                std::vector<double> &scratch) const {
  scratch.resize(code_.size());
  double *v = scratch.data();
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr &in = code_[i];
    double r = 0.0;
    switch (in.op) {
    case Op::Const:
      r = in.value;
      break;
    case Op::S:
      r = p.s;
      break;
    case Op::Eta:
      r = p.eta;
      break;
    case Op::T:
      r = p.t;
      break;
    case Op::XDer:
      if (in.k >= static_cast<int>(p.xjet.size()))
        throw EvalError("base function jet too short for order " +
                            std::to_string(in.k),
                        p.s, p.eta);
      r = p.xjet[in.k];
      break;
    case Op::Neg:
      r = -v[in.a];
      break;
    case Op::Add:
      r = v[in.a] + v[in.b];
      break;
    case Op::Sub:
      r = v[in.a] - v[in.b];
      break;
    case Op::Mul:
      r = v[in.a] * v[in.b];
      break;
    case Op::Div:
      if (v[in.b] == 0.0)
        throw EvalError("division by zero", p.s, p.eta);
      r = v[in.a] / v[in.b];
      break;
    case Op::Pow:
      if (in.k < 0 && v[in.a] == 0.0)
        throw EvalError("negative power of zero", p.s, p.eta);
      r = std::pow(v[in.a], in.k);
      break;
    case Op::Exp:
      r = std::exp(v[in.a]);
      break;
    case Op::Sin:
      r = std::sin(v[in.a]);
      break;
    case Op::Cos:
      r = std::cos(v[in.a]);
      break;
    case Op::Log:
      if (!(v[in.a] > 0.0))
        throw EvalError("log of nonpositive value", p.s, p.eta);
      r = std::log(v[in.a]);
      break;
    }
    if (!std::isfinite(r))
      throw EvalError("non-finite intermediate value", p.s, p.eta);
    v[i] = r;
  }
  for (std::size_t i = 0; i < outputs_.size(); ++i)
    out[i] = v[outputs_[i]];
}

double Tape::eval1(const Point &p) const {
  std::vector<double> scratch;
  double out = 0.0;
  eval(p, std::span<double>(&out, 1), scratch);
  return out;
}

} // namespace tamecert::expr
