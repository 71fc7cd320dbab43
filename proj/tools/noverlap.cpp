// noverlap: generate corpora, remove overlaps, score adjustments, run the benchmark.
//
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 benchmark runs failed.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "noverlap/noverlap.hpp"

namespace fs = std::filesystem;
using namespace noverlap;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitRunFailures = 3;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  if (const auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write \"" + path + "\"");
  out << text;
}

GraphDocument read_graph_any(const std::string& path) {
  const std::string text = read_file(path);
  if (fs::path(path).extension() == ".dot" || fs::path(path).extension() == ".gv") return read_graph_dot(text);
  return read_graph_json(text);
}

Embedding require_positions(const GraphDocument& doc, const std::string& path) {
  if (!doc.embedding) throw ValidationError("\"" + path + "\" has no node positions (run `layout` first)");
  return *doc.embedding;
}

std::vector<Metric> metrics_from_names(const std::vector<std::string>& names, bool all) {
  std::vector<Metric> out;
  if (all) {
    for (const auto& d : kMetricCatalog) out.push_back(d.metric);
    return out;
  }
  if (names.empty()) return {kSelectedMetrics.begin(), kSelectedMetrics.end()};
  for (const auto& name : names) {
    const auto m = metric_from_abbreviation(name);
    if (!m) throw ValidationError("unknown metric \"" + name + "\"");
    out.push_back(*m);
  }
  return out;
}

std::string value_text(const std::optional<double>& v) { return v ? format_real(*v) : "NA"; }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// --- report rendering -------------------------------------------------------

std::string aggregate_text(const AggregateTable& table, const std::vector<Metric>& metrics) {
  std::string out;
  for (const auto& row : table) {
    out += row.algorithm;
    if (row.n) out += "  n=" + std::to_string(*row.n);
    out += "  runs=" + std::to_string(row.records) + "  failed=" + std::to_string(row.failures) + "\n";
    out += "  " + pad("metric", 12) + pad("q1", 14) + pad("median", 14) + pad("q3", 14) + pad("mean", 14) + "undef\n";
    auto line = [&](const std::string& name, const SummaryStats& s) {
      out += "  " + pad(name, 12) + pad(value_text(s.q1), 14) + pad(value_text(s.median), 14) +
             pad(value_text(s.q3), 14) + pad(value_text(s.mean), 14) + std::to_string(s.undefined_count) + "\n";
    };
    for (Metric m : metrics) line(std::string(abbreviation(m)), row.metrics[static_cast<std::size_t>(m)]);
    line("time_ms", row.time_ms);
  }
  return out;
}

std::string aggregate_csv(const AggregateTable& table, const std::vector<Metric>& metrics) {
  std::string out = "algorithm,n,runs,failed,metric,q1,median,q3,mean,count,undefined\n";
  for (const auto& row : table) {
    auto line = [&](const std::string& name, const SummaryStats& s) {
      out += row.algorithm + "," + (row.n ? std::to_string(*row.n) : "") + "," + std::to_string(row.records) + "," +
             std::to_string(row.failures) + "," + name + "," + value_text(s.q1) + "," + value_text(s.median) + "," +
             value_text(s.q3) + "," + value_text(s.mean) + "," + std::to_string(s.count) + "," +
             std::to_string(s.undefined_count) + "\n";
    };
    for (Metric m : metrics) line(std::string(abbreviation(m)), row.metrics[static_cast<std::size_t>(m)]);
    line("time_ms", row.time_ms);
  }
  return out;
}

std::string correlation_text(const CorrelationMatrix& c, const std::vector<Metric>& metrics, bool csv) {
  std::string out = csv ? "metric" : pad("", 12);
  for (Metric m : metrics) out += csv ? "," + std::string(abbreviation(m)) : pad(std::string(abbreviation(m)), 12);
  out += "\n";
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    out += csv ? std::string(abbreviation(metrics[i])) : pad(std::string(abbreviation(metrics[i])), 12);
    for (std::size_t j = 0; j < metrics.size(); ++j) {
      char buf[32];
      if (c[i][j]) {
        std::snprintf(buf, sizeof buf, "%.4f", *c[i][j]);
      } else {
        std::snprintf(buf, sizeof buf, "NA");
      }
      out += csv ? "," + std::string(buf) : pad(buf, 12);
    }
    out += "\n";
  }
  return out;
}

// --- subcommands -------------------------------------------------------------

struct GenerateArgs {
  std::string model = "random";
  std::size_t n = 20;
  std::uint64_t seed = 0;
  std::string out;
  std::string preset;
  std::string config;
  std::string out_dir;
  bool with_layout = false;
  std::size_t layout_iterations = kDefaultLayoutIterations;
};

int run_generate(const GenerateArgs& a) {
  if (!a.preset.empty() || !a.config.empty()) {
    if (a.out_dir.empty()) throw ValidationError("--out-dir is required when generating a corpus");
    BenchConfig cfg = a.config.empty() ? parse_config("preset = \"" + a.preset + "\"\n") : parse_config(read_file(a.config));
    std::size_t written = 0;
    for (GraphModel model : cfg.corpus.models) {
      for (std::size_t n : cfg.corpus.sizes) {
        for (std::uint64_t s = 0; s < cfg.corpus.seeds_per_size; ++s) {
          const auto g = generate(model, n, s, cfg.corpus.node_size);
          std::optional<Embedding> e;
          if (a.with_layout) e = initial_layout(g, s, a.layout_iterations);
          write_output((fs::path(a.out_dir) / (g.graph_id() + ".json")).string(),
                       write_graph_json(g, e ? &*e : nullptr));
          ++written;
        }
      }
    }
    std::cerr << "wrote " << written << " graphs to " << a.out_dir << "\n";
    return 0;
  }
  const auto model = model_from_name(a.model);
  if (!model) throw ValidationError("unknown graph model \"" + a.model + "\"");
  const auto g = generate(*model, a.n, a.seed);
  std::optional<Embedding> e;
  if (a.with_layout) e = initial_layout(g, a.seed, a.layout_iterations);
  write_output(a.out, write_graph_json(g, e ? &*e : nullptr));
  return 0;
}

struct LayoutArgs {
  std::string in;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t iterations = kDefaultLayoutIterations;
};

int run_layout(const LayoutArgs& a) {
  const auto doc = read_graph_any(a.in);
  write_output(a.out, write_graph_json(doc.graph, initial_layout(doc.graph, a.seed, a.iterations)));
  return 0;
}

struct AdjustArgs {
  std::string in;
  std::string out;
  std::string algorithm = "scaling";
  std::uint64_t seed = 0;
  double padding = 0.0;
  std::size_t max_iterations = 1000;
  bool pair = false;
};

int run_adjust(const AdjustArgs& a) {
  const auto doc = read_graph_any(a.in);
  const Embedding initial = require_positions(doc, a.in);
  const auto algorithm = algorithm_from_name(a.algorithm);
  if (!algorithm) throw ValidationError("unknown algorithm \"" + a.algorithm + "\"");
  AdjustParams p;
  p.algorithm = *algorithm;
  p.seed = a.seed;
  p.padding = a.padding;
  p.max_outer_iterations = a.max_iterations;
  const auto outcome = adjust(doc.graph, initial, p);
  write_output(a.out, a.pair ? write_pair_json(doc.graph, initial, outcome.adjusted)
                             : write_graph_json(doc.graph, outcome.adjusted));
  std::cerr << algorithm_name(*algorithm) << ": " << count_overlaps(doc.graph, initial) << " overlaps removed in "
            << std::chrono::duration<double, std::milli>(outcome.wall_time).count() << " ms"
            << (outcome.fallback_used ? " (fallback)" : "") << "\n";
  return 0;
}

struct MetricsArgs {
  std::vector<std::string> files;
  std::vector<std::string> metrics;
  bool all = false;
  std::size_t k = 0;
  bool json = false;
};

int run_metrics(const MetricsArgs& a) {
  std::optional<AdjustmentPair> pair;
  if (a.files.size() == 1) {
    auto [g, init, adj] = read_pair_json(read_file(a.files[0]));
    pair.emplace(std::move(g), std::move(init), std::move(adj));
  } else {
    const auto before = read_graph_any(a.files[0]);
    const auto after = read_graph_any(a.files[1]);
    if (!(before.graph == after.graph)) throw ValidationError("the two files describe different graphs");
    pair.emplace(before.graph, require_positions(before, a.files[0]), require_positions(after, a.files[1]));
  }
  MetricOptions options;
  if (a.k > 0) options.knn_k = a.k;
  const auto report = compute_metrics(*pair, options);
  const auto selected = metrics_from_names(a.metrics, a.all);
  if (a.json) {
    nlohmann::ordered_json out;
    for (Metric m : selected) {
      const auto v = report[m];
      out[std::string(abbreviation(m))] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (Metric m : selected) std::cout << pad(std::string(abbreviation(m)), 12) << value_text(report[m]) << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::size_t parallelism = 0;
  bool dry_run = false;
  bool mask_time = false;
  bool all_metrics = false;
};

int run_bench(const BenchArgs& a) {
  BenchConfig cfg;
  if (!a.config.empty()) {
    cfg = parse_config(read_file(a.config));
  } else if (!a.preset.empty()) {
    cfg = parse_config("preset = \"" + a.preset + "\"\n");
  }
  if (a.parallelism > 0) cfg.run.parallelism = a.parallelism;
  if (a.all_metrics) cfg.report_metrics = metrics_from_names({}, true);

  std::cout << "graphs: " << cfg.graph_count() << "\nruns: " << cfg.run_count() << "\n";
  if (a.dry_run) return 0;

  const auto start = std::chrono::steady_clock::now();
  const auto records = run_benchmark(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!a.out.empty()) write_output(a.out, write_records_csv(records, a.mask_time));

  std::size_t failed = 0, fallbacks = 0;
  for (const auto& r : records) {
    failed += r.ok() ? 0 : 1;
    fallbacks += r.fallback ? 1 : 0;
    if (!r.ok()) std::cerr << "failed: " << r.graph_id << " " << r.algorithm << ": " << r.error << "\n";
  }
  std::cout << "failed: " << failed << "\nfallbacks: " << fallbacks << "\nseconds: " << format_real(secs) << "\n\n";
  std::cout << aggregate_text(aggregate(records), cfg.report_metrics);
  return failed == 0 ? 0 : kExitRunFailures;
}

struct ReportArgs {
  std::string in;
  std::string format = "text";
  bool by_n = false;
  std::vector<std::string> metrics;
  bool all = false;
};

int run_report(const ReportArgs& a) {
  const auto records = read_records_csv(read_file(a.in));
  const auto metrics = metrics_from_names(a.metrics, a.all);
  const auto table = aggregate(records, a.by_n);
  const auto corr = correlation_matrix(records, metrics);
  const bool csv = a.format == "csv";
  std::cout << (csv ? aggregate_csv(table, metrics) : aggregate_text(table, metrics));
  std::cout << "\n" << (csv ? "" : "correlation (Pearson, pairwise complete)\n") << correlation_text(corr, metrics, csv);
  return 0;
}

struct RenderArgs {
  std::string in;
  std::string after;
  std::string out;
  double width = 800.0;
};

int run_render(const RenderArgs& a) {
  const std::string text = read_file(a.in);
  const auto parsed = nlohmann::json::parse(text, nullptr, false);
  if (!parsed.is_discarded() && parsed.is_object() && parsed.contains("initial")) {
    const auto [g, before, after] = read_pair_json(text);
    write_output(a.out, render_svg(g, before, &after, a.width));
    return 0;
  }
  const auto doc = read_graph_any(a.in);
  const Embedding before = require_positions(doc, a.in);
  if (a.after.empty()) {
    write_output(a.out, render_svg(doc.graph, before, nullptr, a.width));
  } else {
    const auto other = read_graph_any(a.after);
    if (!(other.graph == doc.graph)) throw ValidationError("the two files describe different graphs");
    const Embedding after = require_positions(other, a.after);
    write_output(a.out, render_svg(doc.graph, before, &after, a.width));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node overlap removal: algorithms, quality metrics and benchmark"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic graph, or a whole corpus with --preset/--config");
  g->add_option("--model", gen.model, "random|tree|small_world|scale_free");
  g->add_option("-n,--nodes", gen.n, "Node count")->check(CLI::Range(2, 100000));
  g->add_option("--seed", gen.seed);
  g->add_option("-o,--out", gen.out, "Output file (default stdout)");
  g->add_option("--preset", gen.preset, "desk|paper")->check(CLI::IsMember({"desk", "paper"}));
  g->add_option("--config", gen.config, "Corpus config (TOML subset or JSON)");
  g->add_option("--out-dir", gen.out_dir, "Directory for corpus files");
  g->add_flag("--layout", gen.with_layout, "Also compute the initial layout");
  g->add_option("--layout-iterations", gen.layout_iterations);

  LayoutArgs lay;
  auto* l = app.add_subcommand("layout", "Compute the force-directed initial layout");
  l->add_option("input", lay.in, "Graph JSON or DOT")->required();
  l->add_option("-o,--out", lay.out);
  l->add_option("--seed", lay.seed);
  l->add_option("--iterations", lay.iterations);

  AdjustArgs adj;
  auto* ad = app.add_subcommand("adjust", "Remove node overlaps");
  ad->add_option("input", adj.in, "Graph JSON or DOT with positions")->required();
  ad->add_option("-o,--out", adj.out);
  ad->add_option("-a,--algorithm", adj.algorithm, "scaling|pfs|pfs-prime|fta|vpsc|prism|rwordle-l|gtree");
  ad->add_option("--seed", adj.seed);
  ad->add_option("--padding", adj.padding)->check(CLI::NonNegativeNumber);
  ad->add_option("--max-iterations", adj.max_iterations)->check(CLI::PositiveNumber);
  ad->add_flag("--pair", adj.pair, "Write {initial, adjusted} instead of the adjusted graph");

  MetricsArgs met;
  auto* me = app.add_subcommand("metrics", "Score an adjustment: a pair file, or initial and adjusted files");
  me->add_option("files", met.files)->required()->expected(1, 2);
  me->add_option("--metrics", met.metrics, "Abbreviations to print (default: the five selected)");
  me->add_flag("--all-metrics", met.all);
  me->add_option("-k,--knn", met.k, "Neighbourhood size for nm_knn");
  me->add_flag("--json", met.json);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run every algorithm over a corpus and write per-run records");
  b->add_option("--config", bench.config, "TOML subset or JSON");
  b->add_option("--preset", bench.preset)->check(CLI::IsMember({"desk", "paper"}));
  b->add_option("-o,--out", bench.out, "CSV output");
  b->add_option("-j,--parallelism", bench.parallelism);
  b->add_flag("--dry-run", bench.dry_run, "Only print graph and run counts");
  b->add_flag("--mask-time", bench.mask_time, "Write time_ms as 0 for reproducible CSVs");
  b->add_flag("--all-metrics", bench.all_metrics);

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Aggregate a records CSV into quartiles and correlations");
  r->add_option("input", rep.in)->required();
  r->add_option("--format", rep.format)->check(CLI::IsMember({"text", "csv"}));
  r->add_flag("--by-n", rep.by_n);
  r->add_option("--metrics", rep.metrics);
  r->add_flag("--all-metrics", rep.all);

  RenderArgs ren;
  auto* rn = app.add_subcommand("render", "Draw an embedding, or a before/after pair, as SVG");
  rn->add_option("input", ren.in)->required();
  rn->add_option("--after", ren.after);
  rn->add_option("-o,--out", ren.out);
  rn->add_option("--width", ren.width)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*l) return run_layout(lay);
    if (*ad) return run_adjust(adj);
    if (*me) return run_metrics(met);
    if (*b) return run_bench(bench);
    if (*r) return run_report(rep);
    if (*rn) return run_render(ren);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
