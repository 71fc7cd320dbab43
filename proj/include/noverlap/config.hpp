#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "noverlap/bench.hpp"

// Benchmark configuration. Keys (all optional):
//   preset = "desk" | "paper"          base corpus, default desk
//   models = ["random", "tree", ...]
//   sizes = [10, 18, ...]
//   seeds_per_size = 3
//   node_size = {rule = "uniform", w = 4, h = 2}
//             | {rule = "degree_proportional", base = 4, slope = 0.5}
//   algorithms = ["scaling", ...]       default all eight
//   metrics = ["oo_nni", ...]           default the five selected
//   all_metrics = true
//   seed, padding, max_outer_iterations, layout_iterations, parallelism

namespace noverlap {
namespace detail {

/// Parses the TOML subset used by config files: `key = value` lines, [table]
/// headers, strings, integers, floats, booleans, single-line arrays and inline
/// tables.
class TomlSubsetParser {
 public:
  explicit TomlSubsetParser(std::string_view src) : src_(src) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    while (pos_ < src_.size()) {
      skip_blank();
      if (pos_ >= src_.size()) break;
      if (peek() == '\n') {
        next_line();
        continue;
      }
      if (peek() == '[') {
        ++pos_;
        skip_blank();
        const std::string name = key();
        skip_blank();
        expect(']');
        if (root.contains(name)) fail("table [" + name + "] defined twice");
        root[name] = nlohmann::json::object();
        table = &root[name];
      } else {
        const std::string k = key();
        skip_blank();
        expect('=');
        skip_blank();
        if (table->contains(k)) fail("duplicate key \"" + k + "\"");
        (*table)[k] = value();
      }
      skip_blank();
      if (pos_ < src_.size() && peek() != '\n') fail("unexpected trailing characters");
      if (pos_ < src_.size()) next_line();
    }
    return root;
  }

 private:
  char peek() const { return src_[pos_]; }

  void next_line() {
    ++pos_;
    ++line_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("config line " + std::to_string(line_) + ": " + what);
  }

  void expect(char c) {
    if (pos_ >= src_.size() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void skip_blank_lines() {
    while (true) {
      skip_blank();
      if (pos_ < src_.size() && peek() == '\n') {
        next_line();
      } else {
        return;
      }
    }
  }

  std::string key() {
    if (pos_ < src_.size() && peek() == '"') return quoted();
    std::string k;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      k += src_[pos_++];
    }
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::string quoted() {
    expect('"');
    std::string s;
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string");
      char c = src_[pos_++];
      if (c == '"') return s;
      if (c == '\\') {
        if (pos_ >= src_.size()) fail("unterminated string");
        c = src_[pos_++];
        switch (c) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case '"': s += '"'; break;
          case '\\': s += '\\'; break;
          default: fail(std::string("unsupported escape \\") + c);
        }
      } else {
        s += c;
      }
    }
  }

  nlohmann::json value() {
    if (pos_ >= src_.size()) fail("expected a value");
    const char c = peek();
    if (c == '"') return quoted();
    if (c == '[') {
      ++pos_;
      nlohmann::json arr = nlohmann::json::array();
      skip_blank_lines();
      while (peek() != ']') {
        arr.push_back(value());
        skip_blank_lines();
        if (peek() == ',') {
          ++pos_;
          skip_blank_lines();
        } else if (peek() != ']') {
          fail("expected ',' or ']'");
        }
      }
      ++pos_;
      return arr;
    }
    if (c == '{') {
      ++pos_;
      nlohmann::json obj = nlohmann::json::object();
      skip_blank();
      while (peek() != '}') {
        const std::string k = key();
        skip_blank();
        expect('=');
        skip_blank();
        obj[k] = value();
        skip_blank();
        if (peek() == ',') {
          ++pos_;
          skip_blank();
        } else if (peek() != '}') {
          fail("expected ',' or '}'");
        }
      }
      ++pos_;
      return obj;
    }
    std::string word;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' ||
                                  peek() == '-' || peek() == '+' || peek() == '_')) {
      if (peek() != '_') word += peek();
      ++pos_;
    }
    if (word == "true") return true;
    if (word == "false") return false;
    const char* b = word.data();
    const char* e = b + word.size();
    if (word.find_first_of(".eE") == std::string::npos) {
      long long i = 0;
      if (!word.empty() && word[0] == '+') ++b;
      const auto [p, ec] = std::from_chars(b, e, i);
      if (ec == std::errc{} && p == e) return i;
    } else {
      double d = 0.0;
      if (!word.empty() && word[0] == '+') ++b;
      const auto [p, ec] = std::from_chars(b, e, d);
      if (ec == std::errc{} && p == e) return d;
    }
    fail("cannot parse value \"" + word + "\"");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

template <class T>
T config_get(const nlohmann::json& doc, const char* key, T fallback) {
  const auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("config key \"") + key + "\" has the wrong type");
  }
}

}  // namespace detail

inline nlohmann::json parse_toml_subset(std::string_view text) { return detail::TomlSubsetParser(text).parse(); }

inline BenchConfig config_from_json(const nlohmann::json& doc) {
  using detail::config_get;
  if (!doc.is_object()) throw ValidationError("config must be an object");
  static const std::vector<std::string> known{"preset",      "models",     "sizes",   "seeds_per_size",
                                              "node_size",   "algorithms", "metrics", "all_metrics",
                                              "seed",        "padding",    "max_outer_iterations",
                                              "layout_iterations",         "parallelism"};
  for (const auto& [k, v] : doc.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ValidationError("unknown config key \"" + k + "\"");
    }
  }

  BenchConfig c;
  const std::string preset = config_get<std::string>(doc, "preset", "desk");
  if (preset == "paper") {
    c.corpus = paper_scale_spec();
  } else if (preset != "desk") {
    throw ValidationError("unknown preset \"" + preset + "\" (expected desk or paper)");
  }
  if (doc.contains("models")) {
    c.corpus.models.clear();
    for (const auto& name : config_get<std::vector<std::string>>(doc, "models", {})) {
      const auto m = model_from_name(name);
      if (!m) throw ValidationError("unknown graph model \"" + name + "\"");
      c.corpus.models.push_back(*m);
    }
  }
  if (doc.contains("sizes")) c.corpus.sizes = config_get<std::vector<std::size_t>>(doc, "sizes", {});
  c.corpus.seeds_per_size = config_get<std::size_t>(doc, "seeds_per_size", c.corpus.seeds_per_size);
  if (const auto it = doc.find("node_size"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("node_size must be a table");
    const std::string rule = config_get<std::string>(*it, "rule", "uniform");
    if (rule == "uniform") {
      c.corpus.node_size = NodeSizeRule::uniform(config_get<double>(*it, "w", 4.0), config_get<double>(*it, "h", 2.0));
    } else if (rule == "degree_proportional") {
      c.corpus.node_size = NodeSizeRule::degree_proportional(config_get<double>(*it, "base", 4.0),
                                                             config_get<double>(*it, "slope", 0.5));
    } else {
      throw ValidationError("unknown node_size rule \"" + rule + "\"");
    }
  }
  if (doc.contains("algorithms")) {
    c.run.algorithms.clear();
    for (const auto& name : config_get<std::vector<std::string>>(doc, "algorithms", {})) {
      const auto a = algorithm_from_name(name);
      if (!a) throw ValidationError("unknown algorithm \"" + name + "\"");
      c.run.algorithms.push_back(*a);
    }
    if (c.run.algorithms.empty()) throw ValidationError("algorithms must not be empty");
  }
  if (config_get<bool>(doc, "all_metrics", false)) {
    c.report_metrics.clear();
    for (const auto& d : kMetricCatalog) c.report_metrics.push_back(d.metric);
  } else if (doc.contains("metrics")) {
    c.report_metrics.clear();
    for (const auto& name : config_get<std::vector<std::string>>(doc, "metrics", {})) {
      const auto m = metric_from_abbreviation(name);
      if (!m) throw ValidationError("unknown metric \"" + name + "\"");
      c.report_metrics.push_back(*m);
    }
  }
  c.run.seed = config_get<std::uint64_t>(doc, "seed", c.run.seed);
  c.run.padding = config_get<double>(doc, "padding", c.run.padding);
  c.run.max_outer_iterations = config_get<std::size_t>(doc, "max_outer_iterations", c.run.max_outer_iterations);
  c.run.parallelism = config_get<std::size_t>(doc, "parallelism", c.run.parallelism);
  c.layout_iterations = config_get<std::size_t>(doc, "layout_iterations", c.layout_iterations);
  c.corpus.validate();
  if (c.run.padding < 0.0) throw ValidationError("padding must be non-negative");
  if (c.run.max_outer_iterations == 0) throw ValidationError("max_outer_iterations must be positive");
  return c;
}

/// Reads a JSON config when the text starts with '{', TOML-subset otherwise.
inline BenchConfig parse_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      return config_from_json(nlohmann::json::parse(text.begin(), text.end()));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON config: ") + e.what());
    }
  }
  return config_from_json(parse_toml_subset(text));
}

}  // namespace noverlap
