#include "tamecert/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

int report(const tamecert::Error &e) {
  const int code = tamecert::exit_code_for(e);
  std::cerr << tamecert::error_line(code, e.tag(), e.what()) << '\n';
  return code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Tame inversion of composition operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string grading_path;
  std::optional<std::uint64_t> seed;
  std::string fault;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--grading", grading_path, "grading override file");
    sub->add_option("--seed", seed, "overrides the configured seed");
  };
  CLI::App *invert = app.add_subcommand("invert", "run the Newton iteration");
  add_common(invert);
  CLI::App *certify =
      app.add_subcommand("certify", "build and check the generator family");
  add_common(certify);
  CLI::App *selftest =
      app.add_subcommand("selftest", "run the property suites");
  selftest->add_option("--fault", fault)->group("")->check(
      CLI::IsMember({"theta"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << tamecert::error_line(2, "usage", e.what()) << '\n';
    return 2;
  }

  try {
    if (selftest->parsed()) {
      tamecert::SelftestOptions opts;
      opts.fault_theta = fault == "theta";
      return tamecert::cmd_selftest(opts, std::cout);
    }
    tamecert::RunConfig cfg = tamecert::load_config(config_path);
    if (seed)
      cfg.seed = *seed;
    tamecert::CommandOptions opts;
    opts.out = out_dir;
    if (!grading_path.empty())
      opts.grading = grading_path;
    if (invert->parsed())
      return tamecert::cmd_invert(cfg, opts, std::cout);
    return tamecert::cmd_certify(cfg, opts, std::cout);
  } catch (const tamecert::Error &e) {
    return report(e);
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << tamecert::error_line(2, "io", e.what()) << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << tamecert::error_line(4, "internal", e.what()) << '\n';
    return 4;
  }
}
