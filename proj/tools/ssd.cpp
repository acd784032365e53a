// ssd: build, scan, locate and verify potentials with spectral singularities.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ssd/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Complex potentials with prescribed spectral singularities"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_dir = ".";
  double L = -1.0, threshold = -1.0;
  bool svg = false;

  auto add_common = [&](CLI::App* sub) {
    auto* p = sub->add_option("--preset", preset_name, "built-in parameter set");
    auto* c = sub->add_option("--config", config_path, "JSON job file")->check(CLI::ExistingFile);
    p->excludes(c);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--L", L, "truncation length (overrides the job)");
    sub->add_option("--threshold", threshold, "absolute |m22| acceptance threshold");
    sub->add_flag("--svg", svg, "also write an SVG plot");
  };
  auto* build = app.add_subcommand("build", "write potential and base-function samples");
  auto* scan = app.add_subcommand("scan", "write |T|, |R^L|, |R^R| and m22 over k");
  auto* find = app.add_subcommand("find-ss", "locate spectral singularities and their orders");
  auto* verify = app.add_subcommand("verify", "run the consistency checks");
  auto* list = app.add_subcommand("presets", "list built-in presets");
  for (auto* s : {build, scan, find, verify}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ssd::kExitConfig;
  }

  if (list->parsed()) {
    for (const auto& n : ssd::preset_names()) std::cout << n << "\n";
    return 0;
  }

  ssd::JobConfig job;
  try {
    if (!preset_name.empty())
      job = ssd::preset(preset_name);
    else if (!config_path.empty())
      job = ssd::load_job(config_path);
    else
      throw ssd::ConfigError("one of --preset or --config is required");
    if (L >= 0.0) job.L = L;
    if (threshold >= 0.0) job.threshold = threshold;
    ssd::validate(job);
  } catch (const ssd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ssd::kExitConfig;
  }

  ssd::CommandOptions opt;
  opt.out_dir = out_dir;
  opt.svg = svg;
  if (build->parsed()) return ssd::cmd_build(job, opt);
  if (scan->parsed()) return ssd::cmd_scan(job, opt);
  if (find->parsed()) return ssd::cmd_find_ss(job, opt);
  return ssd::cmd_verify(job, opt);
}
