#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wavesym/report.hpp"

namespace {

std::array<int, 3> parse_grid(const std::string& s) {
  std::array<int, 3> g{};
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> g[0] >> c1 >> g[1] >> c2 >> g[2]) || c1 != ',' || c2 != ',' || !is.eof()) {
    throw wavesym::ConfigError("--grid expects nx,ny,nt");
  }
  return g;
}

std::array<double, 6> parse_box(const std::string& s) {
  std::array<double, 6> b{};
  std::istringstream is(s);
  for (int i = 0; i < 6; ++i) {
    char sep = ',';
    if ((i > 0 && !(is >> sep)) || sep != ',' || !(is >> b[i])) {
      throw wavesym::ConfigError("--box expects x0,x1,y0,y1,t0,t1");
    }
  }
  if (!is.eof() && is.peek() != EOF) throw wavesym::ConfigError("--box expects x0,x1,y0,y1,t0,t1");
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie point symmetries of u_tt = f(u)(u_xx + u_yy): derivation, classification, reductions, checks"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", wavesym::kToolVersion);

  std::string case_sel, generator, grid, box, format, out, config, csv_dir;
  int degree = 2;
  double h = 0, tol = 0;
  std::vector<std::string> params;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--case", case_sel, "i | ii | generic");
    sub->add_option("--generator", generator, "v1 .. v5");
    sub->add_option("--degree", degree, "polynomial ansatz degree");
    sub->add_option("--param", params, "constant, e.g. K=1/2 (repeatable)");
    sub->add_option("--grid", grid, "points per axis nx,ny,nt");
    sub->add_option("--box", box, "x0,x1,y0,y1,t0,t1");
    sub->add_option("--fd-step", h, "finite-difference step h");
    sub->add_option("--tol", tol, "numeric residual tolerance");
    sub->add_option("--format", format, "text | json");
    sub->add_option("--out", out, "write the report here instead of stdout");
    sub->add_option("--csv-dir", csv_dir, "directory for convergence CSV files");
    sub->add_option("--config", config, "JSON config file; flags win");
  };
  const std::pair<const char*, const char*> subs[] = {
      {"derive", "determining equations and the printed conditions"},
      {"classify", "symmetry algebra for case i or ii"},
      {"reduce", "invariants and reduced equation for one generator"},
      {"verify", "numeric residuals, transport and drift"},
      {"report-all", "every stage"},
  };
  for (auto [name, help] : subs) common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  wavesym::RunConfig cfg;
  try {
    if (!config.empty()) {
      std::ifstream is(config);
      if (!is) throw wavesym::ConfigError("cannot read " + config);
      wavesym::Json doc;
      try {
        doc = wavesym::Json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw wavesym::ConfigError(std::string("config file: ") + e.what());
      }
      wavesym::apply_config_json(cfg, doc);
    }
    cfg.command = sub->get_name();
    if (sub->count("--case")) cfg.case_sel = case_sel;
    if (sub->count("--generator")) cfg.generator = generator;
    if (sub->count("--degree")) cfg.degree = degree;
    for (const auto& kv : params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw wavesym::ConfigError("--param expects NAME=VALUE, got " + kv);
      cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (sub->count("--grid")) cfg.grid = parse_grid(grid);
    if (sub->count("--box")) cfg.box = parse_box(box);
    if (sub->count("--fd-step")) cfg.h = h;
    if (sub->count("--tol")) cfg.tol = tol;
    if (sub->count("--format")) cfg.format = format;
    if (sub->count("--out")) cfg.out = out;
    if (sub->count("--csv-dir")) cfg.csv_dir = csv_dir;
    if (cfg.command == "derive" && !sub->count("--case")) cfg.case_sel = "generic";
    wavesym::validate(cfg);
  } catch (const wavesym::ConfigError& e) {
    std::cerr << "wavesym: " << e.what() << '\n';
    return 2;
  }

  wavesym::Report rep;
  try {
    rep = wavesym::run(cfg);
  } catch (const wavesym::ConfigError& e) {
    std::cerr << "wavesym: " << e.what() << '\n';
    return 2;
  }
  const std::string text = cfg.format == "json" ? rep.data.dump(2) + "\n" : wavesym::render_text(rep.data);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(cfg.out);
    if (!os) {
      std::cerr << "wavesym: cannot write " << cfg.out << '\n';
      return 2;
    }
    os << text;
  }
  return rep.exit_code;
}
