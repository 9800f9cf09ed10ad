// bellopt: critical noise fractions for two entangled quNits.
//
//   bellopt run    --n N [--model multiport|general] [--restarts R] [--seed S]
//   bellopt sweep  --n-min A --n-max B [--model ...] [--restarts R] [--seed S]
//   bellopt verify PATH
//   bellopt sg3    [--restarts R] [--seed S]
//
// Common output flags: --out PATH (default stdout), --format csv|json.
// Exit status: 0 success, 1 usage error, 2 integrity/verification failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bellopt/commands.hpp"
#include "bellopt/errors.hpp"

namespace {

using bellopt::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

void emit(const bellopt::RunConfig& cfg, const std::vector<bellopt::ResultRecord>& records) {
  if (cfg.output_path.empty()) {
    bellopt::write_records(std::cout, records, cfg.format);
  } else {
    bellopt::write_records(cfg.output_path, records, cfg.format);
  }
}

void progress(const bellopt::ResultRecord& r) {
  std::cerr << "n=" << r.n << " model=" << r.model << " f_max=" << bellopt::format_real(r.f_max)
            << " bound=" << bellopt::format_real(r.separability_bound)
            << " time=" << r.wall_time_seconds << "s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical noise fractions for Bell experiments on two entangled quNits"};
  app.require_subcommand(1);

  bellopt::RunConfig cfg;
  std::string model = "multiport";
  std::string format = "csv";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--restarts", cfg.restarts, "Random restarts of the amoeba search")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Base seed")->capture_default_str();
    sub->add_option("--out", cfg.output_path, "Output file (default: stdout)");
    sub->add_option("--format", format, "csv or json")->capture_default_str();
  };

  CLI::App* run = app.add_subcommand("run", "Optimize settings for one dimension N");
  run->add_option("--n", cfg.n, "Dimension N")->required();
  run->add_option("--model", model, "multiport or general")->capture_default_str();
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "Optimize every N in [n-min, n-max]");
  sweep->add_option("--n-min", cfg.n_min, "Smallest N")->capture_default_str();
  sweep->add_option("--n-max", cfg.n_max, "Largest N")->capture_default_str();
  sweep->add_option("--model", model, "multiport or general")->capture_default_str();
  add_common(sweep);

  CLI::App* verify = app.add_subcommand("verify", "Re-solve stored records");
  verify->add_option("path", cfg.input_path, "CSV or JSON records file")->required();

  CLI::App* sg3 = app.add_subcommand("sg3", "Spin-1 singlet with Stern-Gerlach measurements");
  add_common(sg3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::usage);
  }

  try {
    cfg.format = bellopt::format_from_string(format);
    if (*run) {
      cfg.command = bellopt::Command::run;
      cfg.model = bellopt::family_from_string(model);
      const auto rec = bellopt::cmd_run(cfg);
      progress(rec);
      emit(cfg, {rec});
    } else if (*sweep) {
      cfg.command = bellopt::Command::sweep;
      cfg.model = bellopt::family_from_string(model);
      const auto out = bellopt::cmd_sweep(cfg);
      for (const auto& r : out.records) progress(r);
      emit(cfg, out.records);
      for (const auto& v : out.violations) std::cerr << "sweep check failed: " << v << "\n";
      if (!out.violations.empty()) return code(ExitCode::integrity);
    } else if (*verify) {
      cfg.command = bellopt::Command::verify;
      const auto report = bellopt::cmd_verify(cfg.input_path);
      for (const auto& line : report.lines) std::cout << line << "\n";
      return code(report.ok ? ExitCode::success : ExitCode::integrity);
    } else if (*sg3) {
      cfg.command = bellopt::Command::sg3;
      const auto rec = bellopt::cmd_sg3(cfg);
      progress(rec);
      emit(cfg, {rec});
    }
  } catch (const bellopt::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return code(ExitCode::usage);
  } catch (const bellopt::IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return code(ExitCode::integrity);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(ExitCode::integrity);
  }
  return code(ExitCode::success);
}
