#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "k3dyn/cli.hpp"
#include "k3dyn/errors.hpp"

namespace {

struct Common {
  std::string config_file;
  std::string output;
  std::string surface_file;
  std::uint64_t seed = 0;
  std::uint64_t surface_seed = 0;
  long long bound = 5;
  bool print_config = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_file, "JSON run configuration; flags given on the command line override it");
  sub->add_option("--output,-o", c.output, "artifact path (stdout when omitted)");
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--surface", c.surface_file, "surface JSON as written by the surface subcommand");
  sub->add_option("--surface-seed", c.surface_seed, "seed of the random surface (defaults to --seed)");
  sub->add_option("--bound", c.bound, "coefficient bound of the random surface");
  sub->add_flag("--print-config", c.print_config, "print the resolved configuration and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of automorphisms of Wehler K3 surfaces"};
  app.require_subcommand(1);
  Common common;
  // Parameter overrides per subcommand: option name -> params key.
  std::map<std::string, std::map<std::string, std::string>> texts;
  std::map<std::string, std::map<std::string, CLI::Option*>> given;
  std::map<std::string, std::map<std::string, bool>> flags;

  auto opt = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    given[sub->get_name()][key] = sub->add_option(flag, texts[sub->get_name()][key], help);
  };

  auto* coh = app.add_subcommand("cohomology", "action of the automorphism on the Picard lattice");
  opt(coh, "--order", "order", "composition order of the three involutions, e.g. 123");
  coh->add_flag("--inverse", flags["cohomology"]["inverse"], "use the inverse automorphism");

  auto* surf = app.add_subcommand("surface", "draw a random smooth surface and write it as JSON");
  opt(surf, "--screen-samples", "screen_samples", "sample count of the smoothness screen");

  auto* orb = app.add_subcommand("orbit", "orbit table of a point");
  opt(orb, "--n", "n", "number of steps");
  opt(orb, "--mode", "mode", "exact or float");
  opt(orb, "--direction", "direction", "forward or backward");

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov exponent estimates from random starting points");
  opt(lyap, "--n", "n", "iterations per estimate");
  opt(lyap, "--seeds", "seeds", "number of starting points");

  auto* sad = app.add_subcommand("saddles", "saddle periodic points and their multipliers");
  opt(sad, "--period", "period", "period");
  opt(sad, "--seeds", "seeds", "number of Newton seeds");
  opt(sad, "--tol", "tol", "Newton residual tolerance");
  opt(sad, "--lyapunov-n", "lyapunov_n", "iterations of the per-orbit exponent");

  auto* green = app.add_subcommand("green", "Green potential on a grid of surface points");
  opt(green, "--N", "N", "number of terms");
  opt(green, "--tolerance", "tolerance", "tail bound to report against");
  opt(green, "--grid", "grid", "K or K:R, a K by K grid on [-R, R]^2");
  opt(green, "--sign", "sign", "plus or minus");

  auto* hol = app.add_subcommand("holder", "Holder exponent of the Green potential near saddles");
  opt(hol, "--scales", "scales", "comma-separated radii");
  opt(hol, "--sign", "sign", "plus or minus");
  opt(hol, "--period", "period", "period of the base saddles");
  opt(hol, "--seeds", "seeds", "Newton seeds for the base saddles");
  opt(hol, "--N", "N", "terms of the potential");

  auto* inv = app.add_subcommand("invariance", "L1 invariance of the volume form under pullback");
  opt(inv, "--u", "u", "real bounded test function of x, y, z");
  opt(inv, "--mc", "mc", "Monte Carlo sample size");
  inv->add_flag("--centered,!--uncentered", flags["invariance"]["centered"], "subtract the sample mean of u");

  auto* con = app.add_subcommand("contract", "classify contractions of a curve configuration");
  opt(con, "--input", "input", "JSON file with curves and an optional class");
  opt(con, "--rmax", "rmax", "search radius");

  for (auto* sub : app.get_subcommands({})) add_common(sub, common);

  CLI11_PARSE(app, argc, argv);

  auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    nlohmann::json j = nlohmann::json::object();
    if (!common.config_file.empty()) {
      std::ifstream f(common.config_file, std::ios::binary);
      if (!f) throw k3dyn::Error(k3dyn::ErrorKind::io, "cannot open '" + common.config_file + "'");
      std::ostringstream s;
      s << f.rdbuf();
      j = nlohmann::json::parse(s.str(), nullptr, false);
      if (j.is_discarded()) {
        // Reparse through the library for a located diagnostic.
        k3dyn::cli::parse_config_text(s.str());
      }
      if (j.contains("subcommand") && j["subcommand"] != name)
        throw k3dyn::Error(k3dyn::ErrorKind::config, "config is for subcommand '" +
                                                         j["subcommand"].dump() + "', not '" + name + "'");
    }
    j["subcommand"] = name;
    if (chosen->count("--seed")) j["seed"] = common.seed;
    if (chosen->count("--output")) j["output"] = common.output;
    if (chosen->count("--surface")) j["surface_file"] = common.surface_file;
    if (chosen->count("--surface-seed")) j["surface_seed"] = common.surface_seed;
    if (chosen->count("--bound")) j["bound"] = common.bound;

    const auto defaults = k3dyn::cli::default_params(name);
    auto& params = j["params"];
    if (params.is_null()) params = nlohmann::json::object();
    for (const auto& [key, text] : texts[name]) {
      if (given[name][key]->count() == 0) continue;
      const auto& def = defaults[key];
      try {
        if (def.is_string()) params[key] = text;
        else if (def.is_number_integer()) params[key] = std::stoll(text);
        else params[key] = std::stod(text);
      } catch (const std::exception&) {
        throw k3dyn::Error(k3dyn::ErrorKind::config, "--" + key + ": cannot parse '" + text + "'");
      }
    }
    for (const auto& [key, value] : flags[name]) {
      const std::string flag = key == "centered" ? "--centered" : "--" + key;
      if (chosen->count(flag) || (key == "centered" && chosen->count("--uncentered"))) params[key] = value;
    }

    const auto cfg = k3dyn::cli::parse_config(j);
    if (common.print_config) {
      std::cout << k3dyn::cli::serialize(cfg).dump(2) << "\n";
      return 0;
    }
    return k3dyn::cli::run(cfg, std::cout, std::cerr);
  } catch (const k3dyn::Error& e) {
    std::cerr << "error (" << k3dyn::to_string(e.kind()) << "): " << e.what() << "\n";
    return e.exit_code();
  }
}
