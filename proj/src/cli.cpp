#include "tamecert/cli.hpp"

#include "tamecert/bivar.hpp"
#include "tamecert/funrep.hpp"
#include "tamecert/grading.hpp"
#include "tamecert/inverse.hpp"
#include "tamecert/nemytskii.hpp"
#include "tamecert/tameness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace tamecert {

namespace {

using Setter = std::function<void(RunConfig &, std::string_view)>;

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

template <class T> T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const char *first = text.data();
  const char *last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || text.empty())
    throw ConfigError("invalid value '" + std::string(text) + "' for " +
                      std::string(key));
  return v;
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

const std::map<std::string, Setter, std::less<>> &setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"phi", [](RunConfig &c, std::string_view v) { c.phi = unquote(v); }},
      {"y0", [](RunConfig &c, std::string_view v) { c.y0 = unquote(v); }},
      {"target",
       [](RunConfig &c, std::string_view v) { c.target = unquote(v); }},
      {"D", [](RunConfig &c, std::string_view v) { c.D = parse_number<int>("D", v); }},
      {"M", [](RunConfig &c, std::string_view v) { c.M = parse_number<int>("M", v); }},
      {"N", [](RunConfig &c, std::string_view v) { c.N = parse_number<int>("N", v); }},
      {"l0", [](RunConfig &c, std::string_view v) { c.l0 = parse_number<int>("l0", v); }},
      {"quad_nodes",
       [](RunConfig &c, std::string_view v) {
         c.quad_nodes = parse_number<int>("quad_nodes", v);
       }},
      {"epsilon",
       [](RunConfig &c, std::string_view v) {
         c.epsilon = parse_number<double>("epsilon", v);
       }},
      {"tol", [](RunConfig &c, std::string_view v) { c.tol = parse_number<double>("tol", v); }},
      {"samples",
       [](RunConfig &c, std::string_view v) {
         c.samples = parse_number<int>("samples", v);
       }},
      {"pairs",
       [](RunConfig &c, std::string_view v) { c.pairs = parse_number<int>("pairs", v); }},
      {"seed",
       [](RunConfig &c, std::string_view v) {
         c.seed = parse_number<std::uint64_t>("seed", v);
       }},
  };
  return table;
}

void apply_key(RunConfig &cfg, std::set<std::string> &seen,
               const std::string &key, std::string_view value) {
  const auto &table = setters();
  auto it = table.find(key);
  if (it == table.end())
    throw ConfigError("unknown configuration key '" + key + "'");
  if (!seen.insert(key).second)
    throw ConfigError("configuration key '" + key + "' given twice");
  it->second(cfg, value);
}

RunConfig parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("malformed JSON configuration: ") + e.what());
  }
  if (!j.is_object())
    throw ConfigError("JSON configuration must be an object");
  RunConfig cfg;
  std::set<std::string> seen;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const nlohmann::json &v = it.value();
    std::string text_value;
    if (v.is_string())
      text_value = v.get<std::string>();
    else if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float())
      text_value = v.dump();
    else
      throw ConfigError("configuration key '" + it.key() +
                        "' must be a string or a number");
    apply_key(cfg, seen, it.key(), text_value);
  }
  return cfg;
}

RunConfig parse_key_value(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#')
      continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    apply_key(cfg, seen, trim(std::string_view(body).substr(0, eq)),
              trim(std::string_view(body).substr(eq + 1)));
  }
  return cfg;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += ", ";
    s += fmt(v[i]);
  }
  return s;
}

const char *verdict(bool ok) { return ok ? "pass" : "fail"; }

struct Setup {
  GridPtr grid;
  CompOp op;
  SmoothFn y0;
};

SmoothFn function_of_s(const std::string &text, const GridPtr &grid,
                       const char *what) {
  const BivarFn f = BivarFn::parse(text);
  if (f.depends_on_eta())
    throw ConfigError(std::string(what) + " may only depend on s");
  std::vector<double> vals(grid->size());
  std::vector<double> eta(grid->size(), 0.0);
  f.eval_many(grid->nodes(), eta, vals);
  return project(grid, vals);
}

Setup setup(const RunConfig &cfg) {
  cfg.validate();
  GridConfig gc{cfg.D, cfg.M, cfg.N};
  gc.validate();
  CompOp op(BivarFn::parse(cfg.phi), gc);
  GridPtr grid = op.grid();
  SmoothFn y0 = function_of_s(cfg.y0, grid, "y0");
  return {grid, std::move(op), std::move(y0)};
}

Grading load_grading(const std::filesystem::path &path, int N) {
  std::ifstream is(path);
  if (!is)
    throw ConfigError("cannot open grading file " + path.string());
  Grading m = read_grading(is);
  if (m.max_order() != N)
    throw ConfigError("grading file has " + std::to_string(m.size()) +
                      " entries, expected N + 1 = " + std::to_string(N + 1));
  return m;
}

std::string coeff_line(const std::optional<SmoothFn> &f) {
  if (!f)
    return "none";
  return join(f->coeffs());
}

} // namespace

void RunConfig::validate() const {
  if (trim(phi).empty())
    throw ConfigError("phi is required");
  if (D < 1 || D > 256)
    throw ConfigError("D must lie in [1, 256]");
  if (M < D + 1)
    throw ConfigError("M must be at least D + 1");
  if (N < 1 || N > 12)
    throw ConfigError("N must lie in [1, 12]");
  if (l0 < 1 || l0 > N)
    throw ConfigError("l0 must lie in [1, N]");
  if (quad_nodes < 2)
    throw ConfigError("quad_nodes must be at least 2");
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw ConfigError("epsilon must lie in (0, 1/2]");
  if (!(tol > 0.0))
    throw ConfigError("tol must be positive");
  if (samples < 1 || pairs < 1)
    throw ConfigError("samples and pairs must be positive");
}

RunConfig parse_config(std::string_view text) {
  const std::string t = trim(text);
  RunConfig cfg = !t.empty() && t.front() == '{' ? parse_json(t)
                                                 : parse_key_value(text);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw ConfigError("cannot open configuration file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

int exit_code_for(const Error &e) {
  switch (e.kind()) {
  case ErrorKind::Config:
    return 2;
  case ErrorKind::Certificate:
    return 3;
  case ErrorKind::Numeric:
    return 4;
  }
  return 4;
}

std::string error_line(int code, std::string_view kind, std::string_view msg) {
  std::string escaped;
  for (char c : msg) {
    if (c == '"' || c == '\\')
      escaped += '\\';
    if (c == '\n') {
      escaped += "\\n";
      continue;
    }
    escaped += c;
  }
  return "error: code=" + std::to_string(code) + " kind=" + std::string(kind) +
         " message=\"" + escaped + "\"";
}

void write_file_atomic(const std::filesystem::path &path,
                       std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os)
      throw ConfigError("cannot write " + tmp.string());
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os)
      throw ConfigError("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

int cmd_invert(const RunConfig &cfg, const CommandOptions &opts,
               std::ostream &out) {
  Setup st = setup(cfg);
  const SmoothFn x = function_of_s(cfg.target, st.grid, "target");
  Grading m = Grading::constant(cfg.N, 1.0);
  std::string source;
  if (opts.grading) {
    m = load_grading(*opts.grading, cfg.N);
    source = "override";
  } else {
    const GeneratorFamily gen = build_generator(st.op, st.y0, cfg.l0, cfg.N,
                                                cfg.quad_nodes);
    const Grading canon = gen.canonical();
    const double v0 =
        gauge_norm(st.op.ell_apply(st.y0, x - st.op.apply(st.y0)), canon);
    const double t = std::max(1.0, v0);
    m = canon.scaled(t);
    source = "canonical scaled by " + fmt(t);
  }
  const ColoReport colo =
      colo_check(st.op, st.y0, cfg.epsilon, m, cfg.samples, cfg.seed);
  const InversionResult res =
      newton_invert(st.op, st.y0, x, m, cfg.epsilon, cfg.tol);

  std::ostringstream csv;
  write_result_csv(csv, res);
  std::ostringstream sol;
  write_smoothfn(sol, res.y);
  std::filesystem::create_directories(opts.out);
  write_file_atomic(opts.out / "result.csv", csv.str());
  write_file_atomic(opts.out / "solution.txt", sol.str());

  const bool ok = colo.passed && res.certified();
  out << "grading: " << source << '\n'
      << "iterations: " << res.increments.size() << '\n'
      << "residual_sup: " << fmt(res.residual_sup) << '\n'
      << "error_bound: " << fmt(res.error_bound) << '\n'
      << "colo: " << verdict(colo.passed) << " (worst ratio "
      << fmt(colo.worst_ratio) << ")\n"
      << "cauchy: " << verdict(res.cauchy_ok) << '\n'
      << "domain: " << verdict(res.domain_ok) << '\n'
      << "lipschitz: " << verdict(res.lipschitz_ok) << '\n'
      << "converged: " << verdict(res.converged) << '\n'
      << "verdict: " << verdict(ok) << '\n';
  if (!res.failure.empty())
    out << "failure: " << res.failure << '\n';
  return ok ? 0 : 3;
}

int cmd_certify(const RunConfig &cfg, const CommandOptions &opts,
                std::ostream &out) {
  Setup st = setup(cfg);
  const GeneratorFamily gen =
      build_generator(st.op, st.y0, cfg.l0, cfg.N, cfg.quad_nodes);
  const Grading canon = gen.canonical();
  const Grading m = opts.grading ? load_grading(*opts.grading, cfg.N) : canon;

  std::ostringstream rep;
  rep << "l0: " << gen.l0() << '\n'
      << "N: " << gen.max_order() << '\n'
      << "B0: " << fmt(gen.B0()) << '\n'
      << "chi_zero: " << (gen.chi_zero() ? "true" : "false") << '\n'
      << "n: " << join(gen.n()) << '\n'
      << "x0: " << join(gen.x0()) << '\n'
      << "x1: " << join(gen.x1()) << '\n'
      << "canonical_m: " << join(canon.values()) << '\n'
      << "grading_source: " << (opts.grading ? "override" : "canonical")
      << '\n'
      << "grading: " << join(m.values()) << '\n'
      << "embedding_scale: " << fmt(gen.embedding_scale()) << '\n'
      << "base_point_gauge: " << fmt(gauge_norm(st.y0, m)) << '\n';

  std::string why;
  const bool member = gen.is_member(m, &why);
  rep << "membership: " << verdict(member) << '\n';
  if (!member)
    rep << "membership_witness: " << why << '\n';

  bool star_ok = false;
  if (member) {
    const StarReport star = verify_star(gen, m, cfg.samples, cfg.seed);
    star_ok = star.passed;
    rep << "star: " << verdict(star.passed) << '\n'
        << "star_worst_gauge: " << fmt(star.worst_gauge) << '\n'
        << "v0_inclusion: " << verdict(star.inside_v0) << '\n';
    if (!star.passed)
      rep << "star_witness_u: " << coeff_line(star.witness_u) << '\n'
          << "star_witness_v: " << coeff_line(star.witness_v) << '\n';
  } else {
    rep << "star: skipped\n";
  }

  const ColoReport colo =
      colo_check(st.op, st.y0, cfg.epsilon, m, cfg.samples, cfg.seed);
  rep << "colo: " << verdict(colo.passed) << '\n'
      << "colo_epsilon: " << fmt(cfg.epsilon) << '\n'
      << "colo_worst_ratio: " << fmt(colo.worst_ratio) << '\n';
  if (!colo.passed)
    rep << "colo_witness_u: " << coeff_line(colo.witness_u) << '\n'
        << "colo_witness_v: " << coeff_line(colo.witness_v) << '\n';

  const double cr = contraction_ratio(st.op, st.y0, m, cfg.pairs, cfg.seed);
  const bool cr_ok = cr <= cfg.epsilon + kRatioSlack;
  rep << "contraction_ratio: " << fmt(cr) << '\n'
      << "contraction: " << verdict(cr_ok) << '\n';

  const bool ok = member && star_ok && colo.passed && cr_ok;
  rep << "verdict: " << verdict(ok) << '\n';

  std::filesystem::create_directories(opts.out);
  write_file_atomic(opts.out / "generator.txt", rep.str());
  out << rep.str();
  return ok ? 0 : 3;
}

} // namespace tamecert
