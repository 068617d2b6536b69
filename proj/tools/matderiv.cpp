// matderiv: convergence experiments and derivative routes from the command line.
//
// Exit codes: 0 success, 1 configuration or input error, 2 route
// precondition violated, 3 reference validation failed (including failed
// density-demo checks).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "matderiv/errors.hpp"
#include "matderiv/experiments.hpp"

using namespace matderiv;

namespace {

enum Exit { kOk = 0, kConfig = 1, kPrecondition = 2, kValidation = 3 };

struct GridFlags {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double h_max = 0, h_min = 0;
  std::size_t points = 0;
  std::string out;
  bool deterministic = false;
  double mu = 0.0;
};

void add_common(CLI::App* cmd, GridFlags& g, const ExperimentConfig& d) {
  g.seed = d.seed;
  g.n = d.n;
  g.h_max = d.h_grid.h_max;
  g.h_min = d.h_grid.h_min;
  g.points = d.h_grid.points;
  cmd->add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--n", g.n, "matrix dimension")->capture_default_str();
  cmd->add_option("--h-max", g.h_max, "largest step")->capture_default_str();
  cmd->add_option("--h-min", g.h_min, "smallest step")->capture_default_str();
  cmd->add_option("--points", g.points, "number of steps (log-spaced)")->capture_default_str();
  cmd->add_option("--out", g.out, "output file (default: stdout)");
  cmd->add_flag("--deterministic", g.deterministic, "write zero timings so equal seeds give identical bytes");
}

ExperimentConfig to_config(ExperimentKind kind, const GridFlags& g) {
  ExperimentConfig c = ExperimentConfig::defaults(kind);
  c.seed = g.seed;
  c.n = g.n;
  c.h_grid = {g.h_max, g.h_min, g.points};
  c.output_path = g.out;
  c.deterministic = g.deterministic;
  c.mu = g.mu;
  c.validate();
  return c;
}

template <class Body>
void with_output(const std::string& path, Body&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  body(os);
  if (!os) throw ConfigError("failed writing '" + path + "'");
}

void write_records(const ExperimentConfig& c, const std::vector<ConvergenceRecord>& rs) {
  with_output(c.output_path, [&](std::ostream& os) { write_csv(os, rs); });
}

// "alpha=path", e.g. "1,0=ax.txt"; the zero index names the base matrix.
std::pair<MultiIndex, ComplexMatrix> parse_jet_term(const std::string& text) {
  const auto eq = text.rfind('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("--jet expects alpha=path, got '" + text + "'");
  }
  return {MultiIndex::parse(text.substr(0, eq)), load_matrix(text.substr(eq + 1))};
}

int run(int argc, char** argv) {
  CLI::App app{"Frechet derivatives and mixed partials of matrix functions: convergence experiments"};
  app.require_subcommand(1);

  GridFlags f1r, f1c, f2, dd;
  auto* fig1_real = app.add_subcommand("fig1-real", "first-order cos derivative at A = E = 1");
  add_common(fig1_real, f1r, ExperimentConfig::defaults(ExperimentKind::fig1_real));
  auto* fig1_complex = app.add_subcommand("fig1-complex", "first-order cos derivative, random complex scalars");
  add_common(fig1_complex, f1c, ExperimentConfig::defaults(ExperimentKind::fig1_complex));
  auto* fig2 = app.add_subcommand("fig2", "mixed second partial of cos(A(x, y)), random complex jet");
  add_common(fig2, f2, ExperimentConfig::defaults(ExperimentKind::fig2_partial));
  auto* demo = app.add_subcommand("density-demo", "density-matrix response checks");
  add_common(demo, dd, ExperimentConfig::defaults(ExperimentKind::density_demo));
  demo->add_option("--mu", dd.mu, "chemical potential")->capture_default_str();

  CustomRequest req;
  std::string alpha_text = "1";
  std::vector<std::string> jet_specs;
  std::string custom_out;
  double h = 0.0;
  auto* custom = app.add_subcommand("custom", "derivative of f(A(x)) from jet matrices in text format");
  custom->set_help_flag("--help", "print this help and exit");  // CLI11 treats -h and --h as the same name
  custom->add_option("--func", req.function, "exp, cos, x, x^2 or x^3")->capture_default_str();
  custom->add_option("--route", req.routes, "blocktri, frechet_sum, dk, cs, hybrid or fd (repeatable)")
      ->capture_default_str();
  custom->add_option("--alpha", alpha_text, "multi-index, e.g. 1,1")->capture_default_str();
  custom->add_option("--jet", jet_specs, "alpha=path, repeatable; the zero index is A itself")->required();
  auto* h_opt = custom->add_option("--h", h, "step for cs, hybrid and fd");
  custom->add_option("--out", custom_out, "derivative of the first route (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  if (*fig1_real || *fig1_complex) {
    const bool real = fig1_real->parsed();
    const auto c = to_config(real ? ExperimentKind::fig1_real : ExperimentKind::fig1_complex, real ? f1r : f1c);
    write_records(c, run_fig1(c));
  } else if (*fig2) {
    const auto c = to_config(ExperimentKind::fig2_partial, f2);
    write_records(c, run_fig2(c));
  } else if (*demo) {
    const auto c = to_config(ExperimentKind::density_demo, dd);
    const auto report = run_density_demo(c);
    report.print(std::cerr);
    auto rs = report.records();
    if (c.deterministic)
      for (auto& r : rs) r.runtime_micros = 0.0;
    write_records(c, rs);
    if (!report.all_passed()) {
      std::cerr << "density-demo: some checks exceeded their thresholds\n";
      return kValidation;
    }
  } else if (*custom) {
    req.alpha = MultiIndex::parse(alpha_text);
    for (const auto& s : jet_specs) {
      auto [idx, m] = parse_jet_term(s);
      if (!req.terms.emplace(idx, std::move(m)).second) throw ConfigError("duplicate jet term " + idx.to_string());
    }
    if (h_opt->count() > 0) req.h = h;
    const auto result = run_custom(req);
    with_output(custom_out, [&](std::ostream& os) { write_matrix(os, result.results.front().value); });
    if (!result.comparisons.empty()) {
      std::cerr << "first,second,rel_discrepancy\n";
      for (const auto& c : result.comparisons)
        std::cerr << c.first << ',' << c.second << ',' << c.rel_discrepancy << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ReferenceValidationFailed& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}
