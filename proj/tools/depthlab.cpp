// depthlab <verb> --config <path> [--out <dir>] [--workers N] [--seed S]
//
// Exit codes: 0 ok, 2 invalid config, 3 work ceiling refusal, 4 internal failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "depthlab/config.hpp"
#include "depthlab/error.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kCeiling = 3;
constexpr int kInternal = 4;

const char* const kVerbs[] = {"enumerate", "depth",  "entropy",   "brudno",
                              "shallow-chaos", "qdepth", "coding-gap"};

struct Args {
  std::string config;
  std::string out;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
};

depthlab::harness::ExperimentConfig read_config(const std::string& verb, const Args& args) {
  using nlohmann::json;
  std::ifstream in(args.config, std::ios::binary);
  if (!in) throw depthlab::ValidationError({"cannot read config file " + args.config});
  std::ostringstream text;
  text << in.rdbuf();
  json j;
  try {
    j = json::parse(text.str());
  } catch (const json::exception& e) {
    throw depthlab::ValidationError({std::string("config is not valid JSON: ") + e.what()});
  }
  const auto kind = depthlab::harness::kind_from_string(verb);
  if (j.is_object()) {
    if (!j.contains("experiment")) {
      j["experiment"] = depthlab::harness::to_string(*kind);
    } else if (!j["experiment"].is_string() ||
               depthlab::harness::kind_from_string(j["experiment"].get<std::string>()) != kind) {
      throw depthlab::ValidationError(
          {"config experiment " + j["experiment"].dump() + " does not match verb '" + verb + "'"});
    }
    if (args.seed) j["seed"] = *args.seed;
    if (!args.out.empty()) {
      if (!j.contains("output")) j["output"] = json::object();
      if (j["output"].is_object()) j["output"]["dir"] = args.out;
    }
  }
  return depthlab::harness::parse_config(j.dump());
}

int run(const std::string& verb, const Args& args) {
  try {
    const auto cfg = read_config(verb, args);
    const auto report = depthlab::harness::run_experiment(cfg, {args.workers});
    for (const auto& path : depthlab::report::emit_report(report, cfg.output_dir, cfg.formats)) {
      std::cerr << "wrote " << path << '\n';
    }
    std::cout << report.body.value("summary", nlohmann::json::object()).dump() << '\n';
    return kOk;
  } catch (const depthlab::ValidationError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& item : e.items()) std::cerr << "  - " << item << '\n';
    return kInvalid;
  } catch (const depthlab::WorkCeilingExceeded& e) {
    std::cerr << e.what() << "\n(set DEPTHLAB_WORK_CEILING to raise the ceiling)\n";
    return kCeiling;
  } catch (const depthlab::PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"depthlab: bounded logical depth and algorithmic chaos experiments"};
  app.set_version_flag("--version", std::string(DEPTHLAB_VERSION));
  app.require_subcommand(1);
  Args args;
  for (const char* verb : kVerbs) {
    auto* sub = app.add_subcommand(verb, std::string("run the ") + verb + " experiment");
    sub->add_option("--config", args.config, "experiment config (JSON)")->required();
    sub->add_option("--out", args.out, "output directory (overrides output.dir)");
    sub->add_option("--workers", args.workers, "worker threads, 0 = all cores; never changes output")
        ->check(CLI::Range(0u, 1024u));
    sub->add_option("--seed", args.seed, "master seed (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  return run(app.get_subcommands().front()->get_name(), args);
}
