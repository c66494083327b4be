// llmrs command-line entry point.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "llmrs/catalog.hpp"
#include "llmrs/config.hpp"
#include "llmrs/embed.hpp"
#include "llmrs/engine.hpp"
#include "llmrs/error.hpp"
#include "llmrs/report.hpp"
#include "llmrs/sentiment.hpp"
#include "llmrs/service.hpp"

namespace fs = std::filesystem;
using namespace llmrs;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMissingStore = 2;
constexpr int kExitProvider = 3;
constexpr int kExitValidation = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingStore: return kExitMissingStore;
    case ErrorKind::kProvider: return kExitProvider;
    case ErrorKind::kValidation: return kExitValidation;
    default: return kExitFailure;
  }
}

struct Options {
  std::string config_path;
  std::string store;

  std::string metadata, reviews, out, in;
  std::string target;  // embeddings | sentiments
  std::string provider;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;

  std::string text;
  std::optional<double> max_price, max_license, max_implementation, max_maintenance;
  std::size_t top_k = 5;
  std::optional<std::size_t> preselect_m;
  std::string ranker = "llmrs";
  std::string format = "table";

  std::string host = "0.0.0.0";
  int port = 8080;
};

// defaults < config file < environment < flags
EngineConfig resolve_config(const Options& opt) {
  EngineConfig config;
  config.store_dir = opt.store;
  if (!opt.config_path.empty()) {
    apply_config_file(config, opt.config_path);
  } else if (!opt.store.empty() && fs::exists(fs::path(opt.store) / store_files::kConfig)) {
    apply_config_file(config, fs::path(opt.store) / store_files::kConfig);
  }
  apply_environment(config, [](const char* name) { return std::getenv(name); });
  if (opt.seed) config.seed = *opt.seed;
  if (opt.k) config.k_clusters = *opt.k;
  if (opt.dim) config.embed_dim = *opt.dim;
  if (opt.preselect_m) config.preselect_m = *opt.preselect_m;
  if (!opt.provider.empty()) {
    auto kind = parse_provider_kind(opt.provider);
    if (!kind) throw validation_error("unknown provider '" + opt.provider + "'");
    (opt.target == "sentiments" ? config.sentiment_provider : config.embed_provider) = *kind;
  }
  return config;
}

int cmd_ingest(const Options& opt) {
  auto ingested = ingest_files(opt.metadata, opt.reviews);
  const auto counts = ingested.counts;
  Store store = make_store(std::move(ingested), opt.metadata, opt.reviews);
  save_store(opt.out, store);
  std::cout << "products " << store.catalog.products.size() << " (duplicates " << counts.duplicate_products
            << ", no price " << counts.price_excluded << ", malformed " << counts.metadata_malformed << ")\n"
            << "reviews " << counts.reviews_linked << " (dropped " << counts.reviews_dropped << ", malformed "
            << counts.reviews_malformed << ")\n";
  return 0;
}

int precompute_embeddings_cmd(const Options& opt, const EngineConfig& config) {
  Store store = load_store(opt.store);
  const fs::path out = opt.out.empty() ? fs::path(opt.store) / store_files::kEmbeddings : fs::path(opt.out);
  switch (config.embed_provider) {
    case ProviderKind::kFallback: {
      precompute_embeddings(store.catalog, FallbackEmbeddingProvider(config.embed_dim), out);
      break;
    }
    case ProviderKind::kHttp: {
      precompute_embeddings(store.catalog, HttpEmbeddingProvider(config.embed_http()), out);
      break;
    }
    case ProviderKind::kFile: {
      if (opt.in.empty()) throw provider_error("--provider file needs --in <embeddings.jsonl>");
      auto source = load_embedding_file(opt.in);
      EmbeddingIndex selected(source.dim(), source.provider());
      std::vector<std::string> missing;
      for (const auto& p : store.catalog.products) {
        if (auto row = source.find(p.id)) selected.add(p.id, source.row(*row));
        else missing.push_back(p.id);
      }
      if (!missing.empty()) {
        std::string msg = opt.in + " lacks embeddings for " + std::to_string(missing.size()) + " product(s):";
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
        throw validation_error(msg);
      }
      write_embedding_file(out, selected);
      break;
    }
  }
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int precompute_sentiments_cmd(const Options& opt, const EngineConfig& config) {
  Store store = load_store(opt.store);
  const fs::path out = opt.out.empty() ? fs::path(opt.store) / store_files::kSentiments : fs::path(opt.out);
  std::unique_ptr<SentimentProvider> provider;
  switch (config.sentiment_provider) {
    case ProviderKind::kFallback: provider = std::make_unique<LexiconSentimentProvider>(); break;
    case ProviderKind::kHttp: provider = std::make_unique<HttpSentimentProvider>(config.sentiment_http()); break;
    case ProviderKind::kFile:
      if (opt.in.empty()) throw provider_error("--provider file needs --in <sentiments.jsonl>");
      provider = std::make_unique<FileSentimentProvider>(load_sentiment_file(opt.in));
      break;
  }
  std::vector<ScoreRequest> requests;
  for (const auto& r : store.reviews.reviews) requests.push_back({r.review_id, r.text});
  auto scores = provider->score_batch(requests);
  std::vector<SentimentRow> rows;
  rows.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) rows.push_back({store.reviews.reviews[i].review_id, scores[i]});
  write_sentiment_file(out, provider->name(), provider->normalized(), rows);
  std::cout << "wrote " << out.string() << " (" << rows.size() << " reviews)\n";
  return 0;
}

int cmd_build(const Options& opt, const EngineConfig& config) {
  config.validate();
  auto report = build_store(opt.store, {.k = config.k_clusters, .seed = config.seed});
  std::cout << "reviews " << report.reviews << ", clustered " << report.clustered << ", vocabulary "
            << report.vocabulary << ", iterations " << report.iterations << ", sse " << report.final_sse << "\n";
  for (std::size_t c = 0; c < report.clusters.size(); ++c) {
    const auto& s = report.clusters[c];
    std::cout << "cluster " << c << ": x_p " << s.positive << " x_n " << s.negative << " Y " << s.rate
              << " rating " << s.rating << "\n";
  }
  return 0;
}

QueryRequest make_request(const Options& opt, const EngineConfig& config) {
  QueryRequest req;
  req.text = opt.text;
  req.budget = {opt.max_price, opt.max_license, opt.max_implementation, opt.max_maintenance};
  req.top_k = opt.top_k;
  req.preselect_m = config.preselect_m;
  req.ranker = parse_ranker(opt.ranker).value();
  req.validate();
  return req;
}

int cmd_query(const Options& opt, const EngineConfig& config, bool comparing) {
  config.validate();
  const auto request = make_request(opt, config);
  auto engine = Engine::load(config);
  if (comparing) {
    auto result = engine->compare(request);
    std::cout << (opt.format == "json" ? to_json(result).dump(2) + "\n" : render_table(result, config.display_x100));
  } else {
    auto result = engine->query(request);
    std::cout << (opt.format == "json" ? to_json(result).dump(2) + "\n" : render_table(result, config.display_x100));
  }
  return 0;
}

int cmd_stats(const Options& opt) {
  Store store = load_store(opt.store);
  if (!store.built()) throw missing_store_error("store is not built; run `llmrs build` first");
  auto stats = descriptive_stats(store.catalog);
  std::cout << (opt.format == "json" ? to_json(stats).dump(2) + "\n" : render_table(stats));
  return 0;
}

int cmd_crosstab(const Options& opt) {
  Store store = load_store(opt.store);
  if (!store.built()) throw missing_store_error("store is not built; run `llmrs build` first");
  auto report = crosstab(store.reviews);
  std::cout << (opt.format == "json" ? to_json(report).dump(2) + "\n" : render_table(report));
  return 0;
}

std::atomic<bool> g_stop{false};
std::atomic<bool> g_reload{false};

int cmd_serve(const Options& opt, const EngineConfig& config) {
  config.validate();
  Service service(config);
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  std::signal(SIGHUP, [](int) { g_reload = true; });
  std::thread watcher([&] {
    while (!g_stop) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
      if (g_reload.exchange(false)) {
        try {
          service.reload();
          std::cerr << "llmrs: reloaded store\n";
        } catch (const std::exception& e) {
          std::cerr << "llmrs: reload failed, keeping previous snapshot: " << e.what() << "\n";
        }
      }
    }
    service.stop();
  });
  std::cerr << "llmrs: serving " << opt.store << " on " << opt.host << ":" << opt.port << "\n";
  const bool ok = service.listen(opt.host, opt.port);
  g_stop = true;
  watcher.join();
  if (!ok) {
    std::cerr << "llmrs: cannot listen on " << opt.host << ":" << opt.port << "\n";
    return kExitFailure;
  }
  return 0;
}

void add_query_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--store", opt.store, "Store directory")->required();
  cmd->add_option("--text", opt.text, "Free-text description of the need")->required();
  cmd->add_option("--max-price", opt.max_price)->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-license", opt.max_license)->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-implementation", opt.max_implementation)->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-maintenance", opt.max_maintenance)->check(CLI::NonNegativeNumber);
  cmd->add_option("--top-k", opt.top_k)->check(CLI::PositiveNumber);
  cmd->add_option("--preselect-m", opt.preselect_m)->check(CLI::PositiveNumber);
  cmd->add_option("--ranker", opt.ranker)->check(CLI::IsMember({"llmrs", "baseline"}));
  cmd->add_option("--format", opt.format)->check(CLI::IsMember({"table", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"llmrs: review-aware product recommendations"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "Flat key = value config file");

  auto* ingest_cmd = app.add_subcommand("ingest", "Ingest metadata and reviews into a store");
  ingest_cmd->add_option("--metadata", opt.metadata)->required();
  ingest_cmd->add_option("--reviews", opt.reviews)->required();
  ingest_cmd->add_option("--out", opt.out, "Store directory to create")->required();

  auto* precompute_cmd = app.add_subcommand("precompute", "Write embedding or sentiment interchange files");
  precompute_cmd->add_option("target", opt.target)->required()->check(CLI::IsMember({"embeddings", "sentiments"}));
  precompute_cmd->add_option("--store", opt.store)->required();
  precompute_cmd->add_option("--provider", opt.provider)->required()->check(CLI::IsMember({"file", "http", "fallback"}));
  precompute_cmd->add_option("--in", opt.in, "Existing interchange file (file provider)");
  precompute_cmd->add_option("--dim", opt.dim, "Fallback embedding dimension")->check(CLI::Range(8, 1 << 20));
  precompute_cmd->add_option("--out", opt.out, "Output path (default: inside the store)");

  auto* build_cmd = app.add_subcommand("build", "Fit TF-IDF, cluster reviews, aggregate sentiment");
  build_cmd->add_option("--store", opt.store)->required();
  build_cmd->add_option("--k", opt.k)->check(CLI::Range(2, 1000));
  build_cmd->add_option("--seed", opt.seed);

  auto* query_cmd = app.add_subcommand("query", "Recommend products for a request");
  add_query_flags(query_cmd, opt);
  auto* compare_cmd = app.add_subcommand("compare", "Run both rankers on the same candidates");
  add_query_flags(compare_cmd, opt);

  auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics of a built store");
  stats_cmd->add_option("--store", opt.store)->required();
  stats_cmd->add_option("--format", opt.format)->check(CLI::IsMember({"table", "json"}));

  auto* crosstab_cmd = app.add_subcommand("crosstab", "Sentiment label vs star rating counts");
  crosstab_cmd->add_option("--store", opt.store)->required();
  crosstab_cmd->add_option("--format", opt.format)->check(CLI::IsMember({"table", "json"}));

  auto* serve_cmd = app.add_subcommand("serve", "Serve queries over HTTP");
  serve_cmd->add_option("--store", opt.store)->required();
  serve_cmd->add_option("--port", opt.port)->required()->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", opt.host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (opt.target.empty() && *precompute_cmd) opt.target = "embeddings";
    const EngineConfig config = resolve_config(opt);
    if (*ingest_cmd) return cmd_ingest(opt);
    if (*precompute_cmd) {
      config.validate();
      return opt.target == "embeddings" ? precompute_embeddings_cmd(opt, config) : precompute_sentiments_cmd(opt, config);
    }
    if (*build_cmd) return cmd_build(opt, config);
    if (*query_cmd) return cmd_query(opt, config, false);
    if (*compare_cmd) return cmd_query(opt, config, true);
    if (*stats_cmd) return cmd_stats(opt);
    if (*crosstab_cmd) return cmd_crosstab(opt);
    if (*serve_cmd) return cmd_serve(opt, config);
  } catch (const Error& e) {
    std::cerr << "llmrs: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "llmrs: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
