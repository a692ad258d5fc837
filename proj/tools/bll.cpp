#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bll/config.hpp"
#include "bll/error.hpp"
#include "bll/experiments.hpp"
#include "bll/parallel.hpp"

namespace {

void print(const bll::ReportBundle& r, const std::string& prefix = "") {
  for (const auto& a : r.assertions)
    std::printf("%s%s %-28s value=%s threshold=%s  %s\n", prefix.c_str(), a.pass ? "PASS" : "FAIL", a.name.c_str(),
                bll::format_number(a.value).c_str(), bll::format_number(a.threshold).c_str(), a.detail.c_str());
  for (const auto& c : r.children) print(c, prefix + c.experiment + "/");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary spectral data laboratory"};
  app.require_subcommand(1);
  std::string config, out, cache;
  int threads = 0;
  std::vector<std::string> commands = bll::experiment_ids();
  commands.push_back("verify");
  for (const auto& id : commands) {
    auto* sub = app.add_subcommand(id, id == "verify" ? "run the experiment named in the config" : "run experiment " + id);
    sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default: config output_dir)");
    sub->add_option("--cache", cache, "spectral cache directory (overrides BLL_CACHE_DIR)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    bll::ExperimentConfig cfg = bll::load_config(config);
    if (cmd != "verify" && cmd != cfg.experiment)
      throw bll::Error(bll::ErrorCode::ConfigError,
                       "config names experiment \"" + cfg.experiment + "\" but \"" + cmd + "\" was requested");
    if (threads > 0) bll::set_thread_count(threads);
    bll::RunContext ctx{bll::resolve_cache_dir(cache, cfg)};
    const bll::ReportBundle report = bll::run_experiment(cfg, ctx);
    const std::string dir = out.empty() ? cfg.output_dir : out;
    report.write(dir);
    print(report);
    const bool ok = report.all_pass();
    std::printf("%s: %s (results in %s)\n", cfg.experiment.c_str(), ok ? "all assertions pass" : "assertion failure",
                dir.c_str());
    return ok ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "bll: " << e.what() << "\n";
    return 1;
  }
}
