// vocabx: serve the vocabulary service, generate fixture models, or run a
// batch expansion from a seed list.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "vocabx/commands.hpp"
#include "vocabx/error.hpp"
#include "vocabx/fixture.hpp"
#include "vocabx/service.hpp"

namespace {

vocabx::Service* g_service = nullptr;

void handle_signal(int) {
  if (g_service) g_service->stop();
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    throw vocabx::Error(vocabx::ErrorCode::kInvalidParams, "--listen must be host:port");
  }
  return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

void add_param_flags(CLI::App* cmd, vocabx::SessionParams& params) {
  cmd->add_option("--k", params.k, "Neighbours fetched per model per accepted term")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", params.lambda, "Weight of the rejected-term penalty")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--threshold", params.display_threshold, "Scores below this are dimmed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive vocabulary expansion over word-embedding ensembles"};
  app.require_subcommand(1);

  std::vector<std::string> model_specs;
  vocabx::SessionParams params;

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string listen = "127.0.0.1:8080";
  std::string snapshot_dir;
  std::string static_dir;
  double edge_threshold = params.graph_edge_threshold;
  serve->add_option("--model", model_specs, "Model as id=path (repeatable)")
      ->required()
      ->envname("VOCABX_MODELS")
      ->delimiter(',');
  serve->add_option("--listen", listen, "host:port to listen on")->envname("VOCABX_LISTEN");
  serve->add_option("--snapshot-dir", snapshot_dir, "Persist sessions here")
      ->envname("VOCABX_SNAPSHOT_DIR");
  serve->add_option("--static-dir", static_dir, "Serve UI files from here")
      ->envname("VOCABX_STATIC_DIR");
  serve->add_option("--edge-threshold", edge_threshold, "Minimum similarity for graph edges");
  add_param_flags(serve, params);

  auto* fixture = app.add_subcommand("fixture", "Write a deterministic clustered model file");
  vocabx::FixtureSpec fspec;
  std::string out_path;
  fixture->add_option("--seed", fspec.seed, "RNG seed");
  fixture->add_option("--n", fspec.n, "Number of terms")->check(CLI::PositiveNumber);
  fixture->add_option("--dim", fspec.dim, "Vector dimension")->check(CLI::PositiveNumber);
  fixture->add_option("--clusters", fspec.clusters, "Number of clusters")
      ->check(CLI::PositiveNumber);
  fixture->add_option("--out", out_path, "Output path")->required();

  auto* expand = app.add_subcommand("expand", "Batch expansion from a seed list");
  vocabx::ExpandOptions eopts;
  std::string seeds;
  expand->add_option("--model", model_specs, "Model as id=path (repeatable)")->required();
  expand->add_option("--seeds", seeds, "Seed terms, one per line")->required();
  expand->add_option("--rounds", eopts.rounds, "Auto-accepted top suggestions");
  expand->add_option("--top-n", eopts.top_n, "Suggestions to print");
  add_param_flags(expand, params);

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<vocabx::ModelSpec> specs;
    for (const auto& m : model_specs) specs.push_back(vocabx::parse_model_spec(m));

    if (*fixture) {
      vocabx::generate_fixture(fspec, out_path);
      return 0;
    }

    auto registry = vocabx::load_registry(specs, std::cerr);

    if (*expand) {
      eopts.seeds_file = seeds;
      eopts.params = params;
      std::cout << vocabx::run_expand(eopts, *registry);
      return 0;
    }

    vocabx::ServiceConfig config;
    std::tie(config.host, config.port) = split_listen(listen);
    if (!snapshot_dir.empty()) config.snapshot_dir = snapshot_dir;
    if (!static_dir.empty()) config.static_dir = static_dir;
    params.graph_edge_threshold = edge_threshold;
    config.default_params = params;
    vocabx::Service service(registry, config);
    const int port = service.bind();
    std::cout << "listening on " << config.host << ":" << port << std::endl;
    g_service = &service;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    service.listen();
    g_service = nullptr;
    return 0;
  } catch (const vocabx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
