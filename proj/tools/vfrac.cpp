// vfrac: command-line driver for the phase-field runs, the Figure-3 ODE sweep
// and the traveling-wave sweep.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vfrac/config.hpp"
#include "vfrac/error.hpp"
#include "vfrac/scenarios.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

int report(const std::vector<vfrac::SeedCheck>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("seed-check %-34s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
    ok = ok && c.passed;
  }
  return ok ? 0 : kExitFailure;
}

int run_fpfm_command(const std::string& config, const std::string& out, bool seed) {
  const auto cfg = vfrac::load_scenario_config(config);
  if (seed) return report(vfrac::seed_check(cfg));
  const auto r = vfrac::run_fpfm(cfg, out);
  std::printf("%s: %s, %zu steps, max relative residual %.3e, %.1f s\n", cfg.name.c_str(),
              std::string(vfrac::to_string(r.status)).c_str(), r.steps, r.ledger.max_rel_residual(), r.wall_seconds);
  if (!r.message.empty()) std::printf("  %s\n", r.message.c_str());
  if (cfg.output.strip_diagnostics) {
    const auto& a = r.analysis;
    if (a.steady) {
      std::printf("  steady: V = %.6g, G_c^eps = %.6g, beta = %.6g, L'/V = %.6g\n", a.velocity, a.g_c_eps, a.beta_mean,
                  a.l_ratio);
    } else {
      std::printf("  no steady window\n");
    }
  }
  return r.status == vfrac::RunStatus::ok ? 0 : kExitFailure;
}

int run_figure3_command(const std::string& config, const std::string& out, bool seed) {
  const auto cfg = vfrac::load_figure3_config(config);
  if (seed) return report(vfrac::seed_check(cfg));
  const auto r = vfrac::run_figure3(cfg);
  vfrac::write_figure3(out, cfg, r);
  for (std::size_t k = 0; k < r.alphas.size(); ++k) {
    const auto& tr = r.trajectories[k];
    std::printf("alpha = %-8g L(end) = %.6f  jump fraction = %.4f  max ODE residual = %.3e  (%s)\n", r.alphas[k],
                tr.length.back(), vfrac::growth_fraction(tr, 0.95, 1.05), r.max_residuals[k],
                std::string(vfrac::to_string(tr.status)).c_str());
  }
  return 0;
}

int run_travelwave_command(const std::string& config, const std::string& out, bool seed) {
  const auto cfg = vfrac::load_travelwave_config(config);
  if (seed) return report(vfrac::seed_check(cfg));
  const auto r = vfrac::run_traveling_wave(cfg, out);
  vfrac::write_travelwave_table(std::cout, r);
  for (const auto& f : vfrac::sweep_fits(r)) {
    std::printf("alpha = %g: %zu steady points, G_c^eps = %.6g + %.6g V (alpha beta = %.6g)\n", f.alpha, f.points,
                f.fit.intercept, f.fit.slope, f.alpha * f.beta_mean);
  }
  bool ok = true;
  for (const auto& row : r.rows) ok = ok && row.status == vfrac::RunStatus::ok;
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vfrac: velocity-dependent fracture toolkit"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out;
    bool seed = false;
  };
  Args fpfm, fig3, tw;
  auto add = [&app](const char* name, const char* help, Args& a) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", a.config, "JSON config file")->required()->check(CLI::ExistingFile);
    auto* out = sub->add_option("--out", a.out, "output directory");
    auto* seed = sub->add_flag("--seed-check", a.seed, "run the invariant checks on the config and exit");
    out->excludes(seed);
    return sub;
  };
  auto* fpfm_cmd = add("fpfm", "coupled phase-field run", fpfm);
  auto* fig3_cmd = add("figure3", "Griffith ODE sweep over alpha", fig3);
  add("travelwave", "strip sweep over amplitudes and alphas", tw);

  CLI11_PARSE(app, argc, argv);

  auto need_out = [](const Args& a) {
    if (!a.seed && a.out.empty()) throw CLI::RequiredError("--out");
  };
  try {
    if (*fpfm_cmd) {
      need_out(fpfm);
      return run_fpfm_command(fpfm.config, fpfm.out, fpfm.seed);
    }
    if (*fig3_cmd) {
      need_out(fig3);
      return run_figure3_command(fig3.config, fig3.out, fig3.seed);
    }
    need_out(tw);
    return run_travelwave_command(tw.config, tw.out, tw.seed);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const vfrac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
