#include "k3dyn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "k3dyn/csv.hpp"
#include "k3dyn/currents.hpp"
#include "k3dyn/dynamics.hpp"
#include "k3dyn/lattice.hpp"
#include "k3dyn/picard.hpp"
#include "k3dyn/surface.hpp"

namespace k3dyn::cli {

using nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = {"cohomology", "surface", "orbit",      "lyapunov", "saddles",
                                             "green",      "holder",  "invariance", "contract"};
  return s;
}

json default_params(const std::string& sub) {
  if (sub == "cohomology") return {{"order", "123"}, {"inverse", false}};
  if (sub == "surface") return {{"screen_samples", 1000}};
  if (sub == "orbit") return {{"n", 20}, {"mode", "float"}, {"direction", "forward"}};
  if (sub == "lyapunov") return {{"n", 1000}, {"seeds", 8}};
  if (sub == "saddles") return {{"period", 2}, {"seeds", 200}, {"tol", 1e-10}, {"lyapunov_n", 2000}};
  if (sub == "green") return {{"N", 12}, {"tolerance", 1e-10}, {"grid", "8"}, {"sign", "plus"}};
  if (sub == "holder")
    return {{"scales", "0.1,0.03,0.01,0.003,0.001,0.0003,0.0001"},
            {"sign", "plus"},
            {"period", 2},
            {"seeds", 200},
            {"N", 20}};
  if (sub == "invariance") return {{"u", "clip(re(x), -1, 1)"}, {"mc", 100000}, {"centered", true}};
  if (sub == "contract") return {{"input", ""}, {"rmax", 2}};
  throw Error(ErrorKind::config, "unknown subcommand '" + sub + "'");
}

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::config, msg); }

bool same_kind(const json& value, const json& def) {
  if (def.is_boolean()) return value.is_boolean();
  if (def.is_string()) return value.is_string();
  if (def.is_number_integer()) return value.is_number_integer();
  if (def.is_number()) return value.is_number();
  return false;
}

const char* kind_name(const json& def) {
  if (def.is_boolean()) return "a boolean";
  if (def.is_string()) return "a string";
  if (def.is_number_integer()) return "an integer";
  return "a number";
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::vector<std::string> top = {"subcommand", "seed", "output", "surface_file", "surface_seed",
                                                "bound",      "params"};
  for (const auto& [key, _] : j.items())
    if (std::find(top.begin(), top.end(), key) == top.end()) config_error("unknown key '" + key + "'");
  if (!j.contains("subcommand")) config_error("missing key 'subcommand'");
  if (!j["subcommand"].is_string()) config_error("key 'subcommand' must be a string");
  RunConfig cfg;
  cfg.subcommand = j["subcommand"].get<std::string>();
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), cfg.subcommand) == subs.end())
    config_error("unknown subcommand '" + cfg.subcommand + "'");

  auto get_uint = [&](const char* key) -> std::uint64_t {
    const auto& v = j[key];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      config_error(std::string("key '") + key + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
  };
  if (j.contains("seed")) cfg.seed = get_uint("seed");
  if (j.contains("surface_seed")) cfg.surface_seed = get_uint("surface_seed");
  if (j.contains("output")) {
    if (!j["output"].is_string()) config_error("key 'output' must be a string");
    cfg.output = j["output"].get<std::string>();
  }
  if (j.contains("surface_file")) {
    if (!j["surface_file"].is_string()) config_error("key 'surface_file' must be a string");
    cfg.surface_file = j["surface_file"].get<std::string>();
  }
  if (j.contains("bound")) {
    if (!j["bound"].is_number_integer() || j["bound"].get<long long>() < 1)
      config_error("key 'bound' must be a positive integer");
    cfg.bound = j["bound"].get<long long>();
  }

  cfg.params = default_params(cfg.subcommand);
  if (j.contains("params")) {
    const auto& p = j["params"];
    if (!p.is_object()) config_error("key 'params' must be an object");
    for (const auto& [key, value] : p.items()) {
      if (!cfg.params.contains(key))
        config_error("unknown key 'params." + key + "' for subcommand '" + cfg.subcommand + "'");
      const auto& def = cfg.params[key];
      if (!same_kind(value, def)) config_error("key 'params." + key + "' must be " + kind_name(def));
      cfg.params[key] = def.is_number_float() ? json(value.get<double>()) : value;
    }
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    config_error("config line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
  return parse_config(j);
}

json serialize(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["seed"] = cfg.seed;
  j["output"] = cfg.output;
  j["surface_file"] = cfg.surface_file;
  if (cfg.surface_seed) j["surface_seed"] = *cfg.surface_seed;
  j["bound"] = cfg.bound;
  j["params"] = cfg.params;
  return j;
}

// ---- dispatch ----------------------------------------------------------------------

namespace {

using surface::FloatPoint;
using surface::WehlerCoefficients;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + cfg.output + "' for writing");
  f << text;
  if (!f) throw Error(ErrorKind::io, "write to '" + cfg.output + "' failed");
}

void write_table(const RunConfig& cfg, const std::vector<csv::Row>& rows, const std::vector<std::string>& header,
                 std::ostream& out) {
  std::ostringstream buf;
  csv::emit_table(rows, header, buf);
  write_text(cfg, buf.str(), out);
}

std::string fmt(double x) { return csv::format_double(x); }

WehlerCoefficients load_surface(const RunConfig& cfg, std::size_t screen_samples = 300) {
  if (!cfg.surface_file.empty()) {
    auto c = surface::from_json(read_file(cfg.surface_file));
    if (!c.screen) c.screen = surface::smoothness_screen(c, screen_samples, c.seed.value_or(0));
    return c;
  }
  return surface::random_wehler(cfg.surface_seed.value_or(cfg.seed), cfg.bound, screen_samples);
}

void require_smooth(const WehlerCoefficients& c) {
  if (!c.screen->pass)
    throw Error(ErrorKind::singular_point, "surface failed the smoothness screen (" +
                                               std::to_string(c.screen->flagged.size()) + " flagged points)");
}

std::vector<csv::Row> point_cells(const FloatPoint& p) {
  std::vector<csv::Row> r(1);
  for (const auto& w : p) {
    r[0].push_back(w.w0.real());
    r[0].push_back(w.w0.imag());
    r[0].push_back(w.w1.real());
    r[0].push_back(w.w1.imag());
  }
  return r;
}

std::vector<std::string> point_columns() {
  std::vector<std::string> cols;
  for (const char* a : {"x", "y", "z"})
    for (const char* part : {"w0_re", "w0_im", "w1_re", "w1_im"}) cols.push_back(std::string(a) + "_" + part);
  return cols;
}

int run_cohomology(const RunConfig& cfg, std::ostream& out) {
  const std::string order_text = cfg.params["order"].get<std::string>();
  if (order_text.size() != 3) config_error("params.order must be a permutation of 123");
  std::array<int, 3> order{};
  for (int i = 0; i < 3; ++i) order[i] = order_text[i] - '0';
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{1, 2, 3}) config_error("params.order must be a permutation of 123");
  const bool inverse = cfg.params["inverse"].get<bool>();
  const auto m = picard::automorphism_action(order, inverse);
  const auto cp = picard::char_poly(m);
  const auto data = picard::spectral_data(m);
  out << "T* = [";
  for (int i = 0; i < 3; ++i) {
    out << (i ? ", [" : "[");
    for (int j = 0; j < 3; ++j) out << (j ? ", " : "") << m(i, j);
    out << "]";
  }
  out << "]\n";
  out << "char_poly = x^3 + (" << cp[1] << ")x^2 + (" << cp[2] << ")x + (" << cp[3] << ")\n";
  out << "lambda = " << data.lambda.to_string() << " = " << fmt(data.lambda.to_double()) << "\n";
  out << "entropy = " << std::fixed << std::setprecision(6) << picard::entropy(m) << std::defaultfloat << "\n";
  out << "e_plus = [" << data.e_plus.coords[0].to_string() << ", " << data.e_plus.coords[1].to_string() << ", "
      << data.e_plus.coords[2].to_string() << "]\n";
  out << "raw_pairing = " << k3dyn::to_string(data.raw_pairing) << "\n";
  const std::string js = picard::eigen_data_to_json(data, order, inverse) + "\n";
  if (!cfg.output.empty()) write_text(cfg, js, out);
  return 0;
}

int run_surface(const RunConfig& cfg, std::ostream& out) {
  const auto n = cfg.params["screen_samples"].get<long long>();
  if (n < 0) config_error("params.screen_samples must be nonnegative");
  const auto c = cfg.surface_file.empty()
                     ? surface::random_wehler(cfg.surface_seed.value_or(cfg.seed), cfg.bound, static_cast<std::size_t>(n))
                     : load_surface(cfg, static_cast<std::size_t>(n));
  write_text(cfg, surface::to_json(c) + "\n", out);
  out << "screen_pass = " << (c.screen->pass ? "true" : "false") << "\n";
  out << "screen_flagged = " << c.screen->flagged.size() << "\n";
  if (!c.screen->pass) return static_cast<int>(ErrorKind::singular_point);
  return 0;
}

surface::ExactPoint seeded_rational_point(std::uint64_t seed) {
  Rng rng(sub_seed(seed, 0x9a7));
  surface::ExactPoint p;
  for (auto& w : p) {
    const long num = static_cast<long>(uniform_int(rng, -3, 3));
    const long den = static_cast<long>(uniform_int(rng, 1, 3));
    w = {Rational(den), Rational(num)};
  }
  return p;
}

int run_orbit(const RunConfig& cfg, std::ostream& out) {
  const auto n = cfg.params["n"].get<long long>();
  if (n < 0) config_error("params.n must be nonnegative");
  const std::string mode = cfg.params["mode"].get<std::string>();
  const std::string dir_text = cfg.params["direction"].get<std::string>();
  if (mode != "exact" && mode != "float") config_error("params.mode must be 'exact' or 'float'");
  if (dir_text != "forward" && dir_text != "backward") config_error("params.direction must be 'forward' or 'backward'");
  const auto dir = dir_text == "forward" ? dynamics::Direction::forward : dynamics::Direction::backward;
  auto c = load_surface(cfg);
  require_smooth(c);
  dynamics::OrbitRecord rec;
  if (mode == "exact") {
    if (n > 6)
      throw Error(ErrorKind::unsupported,
                  "exact orbits are limited to 6 steps: heights grow by a factor of about 17.9 per step");
    const auto p = seeded_rational_point(cfg.seed);
    c = surface::through_point(c, p);
    out << "surface shifted in c000 so the seeded rational point lies on it\n";
    rec = dynamics::orbit(c, p, static_cast<std::size_t>(n), dir);
  } else {
    Rng rng(sub_seed(cfg.seed, 1));
    rec = dynamics::orbit(c, surface::sample_point(c, rng), static_cast<std::size_t>(n), dir);
  }
  write_table(cfg, csv::orbit_rows(rec), csv::orbit_header(), out);
  out << "steps = " << rec.steps() << "\n";
  out << "complete = " << (rec.complete ? "true" : "false") << "\n";
  if (!rec.complete) out << "abort = " << rec.abort_reason << "\n";
  const auto ell = dynamics::lifted_log_norms(rec);
  if (ell.size() > 2) {
    auto size = [](const std::array<double, 3>& v) {
      return std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])});
    };
    const std::size_t k = ell.size() - 1;
    out << "lift_growth_rate = " << fmt(std::log(size(ell[k]) / size(ell[k - 1]))) << "\n";
  }
  return rec.complete ? 0 : static_cast<int>(ErrorKind::degenerate_fiber);
}

int run_lyapunov(const RunConfig& cfg, std::ostream& out) {
  const auto n = cfg.params["n"].get<long long>();
  const auto k = cfg.params["seeds"].get<long long>();
  if (n < 10) config_error("params.n must be at least 10");
  if (k < 1) config_error("params.seeds must be positive");
  const auto c = load_surface(cfg);
  require_smooth(c);
  std::vector<csv::Row> rows;
  double sum = 0;
  for (long long i = 0; i < k; ++i) {
    Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const auto p = surface::sample_point(c, rng, static_cast<int>(i % 3));
    const auto est = dynamics::lyapunov(c, p, static_cast<std::size_t>(n), sub_seed(cfg.seed, 1000 + i));
    rows.push_back({i, static_cast<long long>(est.n), est.lambda_plus, est.half_width});
    sum += est.lambda_plus;
  }
  write_table(cfg, rows, {"seed_index", "n", "estimate", "half_width"}, out);
  const double mean = sum / static_cast<double>(k);
  out << "lyapunov_mean = " << fmt(mean) << "\n";
  if (mean > 0) {
    const auto d = dynamics::dim_plus(currents::lambda() > 0 ? std::log(currents::lambda()) : 0.0, mean);
    out << "dim_plus = " << fmt(d.value) << (d.flagged ? " (flagged: exceeds 2)" : "") << "\n";
  }
  return 0;
}

int run_saddles(const RunConfig& cfg, std::ostream& out) {
  const auto period = cfg.params["period"].get<long long>();
  const auto seeds = cfg.params["seeds"].get<long long>();
  const double tol = cfg.params["tol"].get<double>();
  const auto ln = cfg.params["lyapunov_n"].get<long long>();
  if (period < 1) config_error("params.period must be positive");
  if (seeds < 0) config_error("params.seeds must be nonnegative");
  if (!(tol > 0)) config_error("params.tol must be positive");
  if (ln < 10) config_error("params.lyapunov_n must be at least 10");
  const auto c = load_surface(cfg);
  require_smooth(c);
  dynamics::PeriodicSearchOptions opts;
  opts.seed = cfg.seed;
  const auto found = dynamics::periodic_points(c, static_cast<int>(period), static_cast<std::size_t>(seeds), tol, opts);
  std::vector<std::string> header = {"index", "period"};
  for (const auto& col : point_columns()) header.push_back(col);
  for (const char* col : {"m1_re", "m1_im", "m2_re", "m2_im", "abs_m1m2", "residual", "lyapunov", "half_width",
                          "dim_plus"})
    header.push_back(col);
  std::vector<csv::Row> rows;
  double worst = 0;
  const double h = std::log(currents::lambda());
  for (std::size_t i = 0; i < found.size(); ++i) {
    const auto& s = found[i];
    csv::Row row = {static_cast<long long>(i), static_cast<long long>(s.period)};
    const auto cells = point_cells(s.point);
    row.insert(row.end(), cells[0].begin(), cells[0].end());
    const double prod = std::abs(s.multipliers[0] * s.multipliers[1]);
    worst = std::max(worst, std::fabs(prod - 1));
    const auto est = dynamics::lyapunov_periodic(c, s.cycle, static_cast<std::size_t>(ln), sub_seed(cfg.seed, i));
    row.insert(row.end(), {s.multipliers[0].real(), s.multipliers[0].imag(), s.multipliers[1].real(),
                           s.multipliers[1].imag(), prod, s.residual, est.lambda_plus, est.half_width,
                           dynamics::dim_plus(h, est.lambda_plus).value});
    rows.push_back(std::move(row));
  }
  write_table(cfg, rows, header, out);
  out << "saddle_orbits = " << found.size() << "\n";
  out << "max_unimodularity_defect = " << fmt(worst) << "\n";
  if (worst > 1e-6) {
    out << "invariant failure: |m1 m2| differs from 1 by more than 1e-6\n";
    return static_cast<int>(ErrorKind::invariant_violation);
  }
  return 0;
}

std::pair<int, double> parse_grid(const std::string& text) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    const int k = std::stoi(text.substr(0, colon), &used);
    double r = 1.0;
    if (colon != std::string::npos) r = std::stod(text.substr(colon + 1));
    if (k < 1 || !(r > 0)) throw std::invalid_argument("range");
    return {k, r};
  } catch (const std::exception&) {
    config_error("params.grid must look like K or K:R with K >= 1 and R > 0");
  }
}

currents::Sign parse_sign(const std::string& s) {
  if (s == "plus") return currents::Sign::plus;
  if (s == "minus") return currents::Sign::minus;
  config_error("params.sign must be 'plus' or 'minus'");
}

int run_green(const RunConfig& cfg, std::ostream& out) {
  const auto N = cfg.params["N"].get<long long>();
  const double tol = cfg.params["tolerance"].get<double>();
  if (N < 0) config_error("params.N must be nonnegative");
  const auto [k, radius] = parse_grid(cfg.params["grid"].get<std::string>());
  const auto sign = parse_sign(cfg.params["sign"].get<std::string>());
  const auto c = load_surface(cfg);
  require_smooth(c);
  const auto w = currents::eigen_weights(sign);
  std::vector<std::string> header = {"index"};
  for (const char* a : {"x", "y", "z"}) {
    header.push_back(std::string("flip_") + a);
    header.push_back(std::string("t") + a + "_re");
    header.push_back(std::string("t") + a + "_im");
  }
  for (const char* col : {"g", "n_terms", "tail_bound", "flagged"}) header.push_back(col);
  std::vector<csv::Row> rows;
  std::size_t over = 0, flagged = 0;
  double worst_tail = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double x = k == 1 ? 0.0 : -radius + 2 * radius * i / (k - 1);
      const double y = k == 1 ? 0.0 : -radius + 2 * radius * j / (k - 1);
      FloatPoint base{surface::Pair<surface::Complex>{1.0, x}, {1.0, y}, {1.0, 0.0}};
      const auto q = surface::fiber_quadratic(c, 2, base);
      if (surface::is_degenerate(q, c.scale())) continue;
      for (const auto& root : surface::fiber_roots(q)) {
        FloatPoint p = base;
        p[2] = root;
        p = surface::normalized(p);
        const auto cp = surface::to_chart(p);
        const auto ev = currents::green_value(c, p, w, sign, static_cast<std::size_t>(N));
        csv::Row row = {static_cast<long long>(rows.size())};
        for (int a = 0; a < 3; ++a) {
          row.push_back(static_cast<long long>(cp.flip[a]));
          row.push_back(cp.t[a].real());
          row.push_back(cp.t[a].imag());
        }
        row.push_back(ev.value);
        row.push_back(static_cast<long long>(ev.n_terms));
        row.push_back(ev.tail_bound);
        row.push_back(static_cast<long long>(ev.usable() ? 0 : 1));
        rows.push_back(std::move(row));
        if (!ev.usable()) ++flagged;
        worst_tail = std::max(worst_tail, ev.tail_bound);
        if (ev.tail_bound > tol) ++over;
      }
    }
  }
  write_table(cfg, rows, header, out);
  out << "points = " << rows.size() << "\n";
  out << "max_tail_bound = " << fmt(worst_tail) << "\n";
  out << "tail_bound_above_tolerance = " << over << "\n";
  out << "flagged = " << flagged << "\n";
  return 0;
}

std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(csv::parse_double(item));
    } catch (const Error&) {
      config_error("params.scales must be a comma-separated list of numbers");
    }
  }
  return out;
}

int run_holder(const RunConfig& cfg, std::ostream& out) {
  const auto scales = parse_scales(cfg.params["scales"].get<std::string>());
  const auto sign = parse_sign(cfg.params["sign"].get<std::string>());
  const auto period = cfg.params["period"].get<long long>();
  const auto seeds = cfg.params["seeds"].get<long long>();
  const auto N = cfg.params["N"].get<long long>();
  if (period < 1 || seeds < 1 || N < 1) config_error("params.period, params.seeds and params.N must be positive");
  const auto c = load_surface(cfg);
  require_smooth(c);
  dynamics::PeriodicSearchOptions opts;
  opts.seed = cfg.seed;
  const auto found = dynamics::periodic_points(c, static_cast<int>(period), static_cast<std::size_t>(seeds), 1e-10, opts);
  if (found.empty())
    throw Error(ErrorKind::estimator, "no saddles found near which to sample; raise params.seeds or params.period");
  std::vector<FloatPoint> base;
  for (const auto& s : found) base.push_back(s.point);
  const auto rep = currents::holder_estimate(c, base, currents::eigen_weights(sign), sign, scales,
                                             static_cast<std::size_t>(N));
  json j = {{"sign", currents::to_string(sign)},
            {"base_points", base.size()},
            {"beta", rep.beta},
            {"intercept", rep.intercept},
            {"r_squared", rep.r_squared},
            {"reliable", rep.reliable},
            {"degenerate", rep.degenerate},
            {"scales", rep.scales},
            {"oscillation", rep.oscillation},
            {"pairs", rep.pairs},
            {"excluded", rep.excluded},
            {"note", rep.note}};
  write_text(cfg, j.dump(2) + "\n", out);
  out << "beta = " << fmt(rep.beta) << "\n";
  out << "r_squared = " << fmt(rep.r_squared) << (rep.reliable ? "" : " (unreliable)") << "\n";
  return rep.degenerate ? static_cast<int>(ErrorKind::estimator) : 0;
}

int run_invariance(const RunConfig& cfg, std::ostream& out) {
  const auto u = expr::parse_test_function(cfg.params["u"].get<std::string>());
  const auto mc = cfg.params["mc"].get<long long>();
  if (mc < 2) config_error("params.mc must be at least 2");
  const bool centered = cfg.params["centered"].get<bool>();
  const auto c = load_surface(cfg);
  require_smooth(c);
  const auto rep = currents::l1_contraction_test(c, u, static_cast<std::size_t>(mc), cfg.seed, centered);
  write_table(cfg,
              {{u.text(), static_cast<long long>(rep.n), rep.norm_u, rep.norm_uT, rep.standard_error, rep.mean,
                rep.contraction_factor, std::string(rep.pass ? "true" : "false")}},
              {"u", "n", "norm_u", "norm_u_T", "standard_error", "mean", "contraction_factor", "pass"}, out);
  out << "norm_u = " << fmt(rep.norm_u) << "\n";
  out << "norm_u_T = " << fmt(rep.norm_uT) << "\n";
  out << "standard_error = " << fmt(rep.standard_error) << "\n";
  out << "contraction_factor = " << fmt(rep.contraction_factor) << "\n";
  if (!rep.pass) {
    out << "invariant failure: norms differ by more than 3 standard errors\n";
    return static_cast<int>(ErrorKind::invariant_violation);
  }
  return 0;
}

int run_contract(const RunConfig& cfg, std::ostream& out) {
  const std::string path = cfg.params["input"].get<std::string>();
  if (path.empty()) config_error("params.input is required for contract");
  const auto rmax = cfg.params["rmax"].get<long long>();
  const auto in = lattice::parse_contraction_input(read_file(path));
  const auto rep = lattice::contraction_report(in.alpha, in.curves, static_cast<long>(rmax));
  write_text(cfg, lattice::report_to_json(rep) + "\n", out);
  out << "null_curves = " << rep.null_curves.size() << "\n";
  for (std::size_t i = 0; i < rep.components.size(); ++i)
    out << "component " << i << " = " << lattice::to_string(rep.components[i].verdict) << "\n";
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == "cohomology") return run_cohomology(cfg, out);
    if (cfg.subcommand == "surface") return run_surface(cfg, out);
    if (cfg.subcommand == "orbit") return run_orbit(cfg, out);
    if (cfg.subcommand == "lyapunov") return run_lyapunov(cfg, out);
    if (cfg.subcommand == "saddles") return run_saddles(cfg, out);
    if (cfg.subcommand == "green") return run_green(cfg, out);
    if (cfg.subcommand == "holder") return run_holder(cfg, out);
    if (cfg.subcommand == "invariance") return run_invariance(cfg, out);
    if (cfg.subcommand == "contract") return run_contract(cfg, out);
    throw Error(ErrorKind::config, "unknown subcommand '" + cfg.subcommand + "'");
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.exit_code();
  }
}

}  // namespace k3dyn::cli
