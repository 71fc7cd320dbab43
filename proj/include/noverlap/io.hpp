#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "noverlap/catalog.hpp"
#include "noverlap/model.hpp"
#include "noverlap/record.hpp"

namespace noverlap {

struct GraphDocument {
  SizedGraph graph;
  std::optional<Embedding> embedding;
};

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace detail {

inline double json_number(const nlohmann::json& obj, const char* key, const std::string& locus) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(locus + ": missing field \"" + key + "\"");
  if (!it->is_number()) throw ParseError(locus + ": field \"" + key + "\" must be a number");
  return it->get<double>();
}

inline GraphDocument graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("top level must be an object");
  std::string graph_id;
  if (const auto it = doc.find("graph_id"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("\"graph_id\" must be a string");
    graph_id = it->get<std::string>();
  }
  const auto nodes_it = doc.find("nodes");
  if (nodes_it == doc.end() || !nodes_it->is_array()) throw ParseError("missing array field \"nodes\"");

  std::vector<Node> nodes;
  std::unordered_map<std::string, Point> positions;
  std::size_t with_position = 0;
  for (std::size_t i = 0; i < nodes_it->size(); ++i) {
    const auto& item = (*nodes_it)[i];
    std::string locus = "node #" + std::to_string(i);
    if (!item.is_object()) throw ParseError(locus + ": must be an object");
    const auto id_it = item.find("id");
    if (id_it == item.end() || !id_it->is_string()) throw ParseError(locus + ": missing string field \"id\"");
    const std::string id = id_it->get<std::string>();
    locus += " (\"" + id + "\")";
    nodes.push_back({id, json_number(item, "w", locus), json_number(item, "h", locus)});
    const bool has_x = item.contains("x"), has_y = item.contains("y");
    if (has_x != has_y) throw ParseError(locus + ": x and y must be given together");
    if (has_x) {
      ++with_position;
      positions[id] = {json_number(item, "x", locus), json_number(item, "y", locus)};
    }
  }
  if (with_position != 0 && with_position != nodes.size()) {
    throw ParseError("either all nodes carry x/y or none do (" + std::to_string(with_position) + " of " +
                     std::to_string(nodes.size()) + " do)");
  }

  std::vector<NamedEdge> edges;
  if (const auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("\"edges\" must be an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto& e = (*it)[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        throw ParseError("edge #" + std::to_string(k) + ": must be a pair of node ids");
      }
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  } else {
    throw ParseError("missing array field \"edges\"");
  }

  GraphDocument out{SizedGraph(std::move(nodes), edges, graph_id), std::nullopt};
  if (with_position != 0) out.embedding = Embedding::from_map(out.graph, positions);
  return out;
}

inline nlohmann::ordered_json graph_to_json(const SizedGraph& graph, const Embedding* embedding) {
  nlohmann::ordered_json doc;
  doc["graph_id"] = graph.graph_id();
  auto nodes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < graph.n(); ++i) {
    const Node& v = graph.node(i);
    nlohmann::ordered_json item;
    item["id"] = v.id;
    item["w"] = v.w;
    item["h"] = v.h;
    if (embedding) {
      item["x"] = (*embedding)[i].x;
      item["y"] = (*embedding)[i].y;
    }
    nodes.push_back(std::move(item));
  }
  doc["nodes"] = std::move(nodes);
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : graph.edges()) edges.push_back({graph.node(e.u).id, graph.node(e.v).id});
  doc["edges"] = std::move(edges);
  return doc;
}

}  // namespace detail

inline GraphDocument read_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return detail::graph_from_json(doc);
}

/// Canonical form: nodes in id order, edges sorted, fixed key order, one line.
inline std::string write_graph_json(const SizedGraph& graph, const Embedding* embedding = nullptr) {
  if (embedding && !embedding->is_total_over(graph)) throw ValidationError("embedding is not total over graph");
  return detail::graph_to_json(graph, embedding).dump() + "\n";
}

inline std::string write_graph_json(const SizedGraph& graph, const Embedding& embedding) {
  return write_graph_json(graph, &embedding);
}

/// A paired file holds {"initial": <graph>, "adjusted": <graph>} over the same graph.
inline std::tuple<SizedGraph, Embedding, Embedding> read_pair_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("initial") || !doc.contains("adjusted")) {
    throw ParseError("paired file needs \"initial\" and \"adjusted\" objects");
  }
  auto a = detail::graph_from_json(doc["initial"]);
  auto b = detail::graph_from_json(doc["adjusted"]);
  if (!a.embedding || !b.embedding) throw ValidationError("both sides of a pair need positions");
  if (!(a.graph == b.graph)) throw ValidationError("initial and adjusted describe different graphs");
  return {std::move(a.graph), std::move(*a.embedding), std::move(*b.embedding)};
}

inline std::string write_pair_json(const SizedGraph& graph, const Embedding& initial, const Embedding& adjusted) {
  nlohmann::ordered_json doc;
  doc["initial"] = detail::graph_to_json(graph, &initial);
  doc["adjusted"] = detail::graph_to_json(graph, &adjusted);
  return doc.dump() + "\n";
}

// ---------------------------------------------------------------------------
// DOT subset
// ---------------------------------------------------------------------------

namespace detail {

class DotLexer {
 public:
  enum class Kind { id, lbrace, rbrace, lbracket, rbracket, equals, semicolon, comma, edge_op, end };
  struct Token {
    Kind kind;
    std::string text;
    std::size_t line;
    std::size_t column;
  };

  explicit DotLexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const std::size_t line = line_, col = col_;
    if (pos_ >= src_.size()) return {Kind::end, "", line, col};
    const char c = src_[pos_];
    auto single = [&](Kind k) {
      advance();
      return Token{k, std::string(1, c), line, col};
    };
    switch (c) {
      case '{': return single(Kind::lbrace);
      case '}': return single(Kind::rbrace);
      case '[': return single(Kind::lbracket);
      case ']': return single(Kind::rbracket);
      case '=': return single(Kind::equals);
      case ';': return single(Kind::semicolon);
      case ',': return single(Kind::comma);
      default: break;
    }
    if (c == '-' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == '-' || src_[pos_ + 1] == '>')) {
      advance();
      advance();
      return {Kind::edge_op, "--", line, col};
    }
    if (c == '"') {
      advance();
      std::string text;
      while (true) {
        if (pos_ >= src_.size()) fail(line, col, "unterminated string");
        const char d = src_[pos_];
        if (d == '"') break;
        if (d == '\\' && pos_ + 1 < src_.size()) {
          const char e = src_[pos_ + 1];
          if (e == '"') {
            text += '"';
            advance();
            advance();
            continue;
          }
          if (e == '\n') {  // line continuation
            advance();
            advance();
            continue;
          }
        }
        text += d;
        advance();
      }
      advance();
      return {Kind::id, text, line, col};
    }
    if (is_id_char(c) || c == '-' || c == '.') {
      std::string text;
      while (pos_ < src_.size() && (is_id_char(src_[pos_]) || src_[pos_] == '.' ||
                                    (src_[pos_] == '-' && text.empty()))) {
        text += src_[pos_];
        advance();
      }
      return {Kind::id, text, line, col};
    }
    fail(line, col, std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] static void fail(std::size_t line, std::size_t col, const std::string& what) {
    throw ParseError("DOT " + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }

 private:
  static bool is_id_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#' && col_ == 1) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
          advance();
        }
        if (pos_ < src_.size()) {
          advance();
          advance();
        }
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class DotParser {
 public:
  explicit DotParser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  GraphDocument parse() {
    if (is_keyword("strict")) shift();
    if (!is_keyword("graph") && !is_keyword("digraph")) fail("expected 'graph' or 'digraph'");
    shift();
    std::string graph_id;
    if (tok_.kind == DotLexer::Kind::id) {
      graph_id = tok_.text;
      shift();
    }
    expect(DotLexer::Kind::lbrace, "'{'");
    while (tok_.kind != DotLexer::Kind::rbrace) {
      if (tok_.kind == DotLexer::Kind::end) fail("unexpected end of input, expected '}'");
      statement();
      while (tok_.kind == DotLexer::Kind::semicolon) shift();
    }
    shift();
    if (tok_.kind != DotLexer::Kind::end) fail("trailing input after '}'");
    return build(graph_id);
  }

 private:
  using Attrs = std::map<std::string, std::pair<std::string, DotLexer::Token>>;

  struct NodeInfo {
    std::size_t order;
    Attrs attrs;
    DotLexer::Token first_seen;
  };

  bool is_keyword(std::string_view kw) const {
    if (tok_.kind != DotLexer::Kind::id || tok_.text.size() != kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(tok_.text[i])) != kw[i]) return false;
    }
    return true;
  }

  void shift() { tok_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& what) const { DotLexer::fail(tok_.line, tok_.column, what); }

  void expect(DotLexer::Kind kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    shift();
  }

  Attrs attr_lists() {
    Attrs attrs;
    while (tok_.kind == DotLexer::Kind::lbracket) {
      shift();
      while (tok_.kind != DotLexer::Kind::rbracket) {
        if (tok_.kind != DotLexer::Kind::id) fail("expected attribute name");
        const std::string key = tok_.text;
        shift();
        expect(DotLexer::Kind::equals, "'='");
        if (tok_.kind != DotLexer::Kind::id) fail("expected attribute value");
        attrs[key] = {tok_.text, tok_};
        shift();
        if (tok_.kind == DotLexer::Kind::comma || tok_.kind == DotLexer::Kind::semicolon) shift();
      }
      shift();
    }
    return attrs;
  }

  NodeInfo& touch(const DotLexer::Token& t) {
    auto [it, fresh] = nodes_.try_emplace(t.text, NodeInfo{nodes_.size(), {}, t});
    if (fresh) {
      for (const auto& [k, v] : node_defaults_) it->second.attrs.insert({k, v});
    }
    return it->second;
  }

  void statement() {
    if (is_keyword("subgraph")) fail("subgraphs are not supported");
    if (tok_.kind == DotLexer::Kind::lbrace) fail("anonymous subgraphs are not supported");
    if (tok_.kind != DotLexer::Kind::id) fail("expected a statement");
    if (is_keyword("node") || is_keyword("edge") || is_keyword("graph")) {
      const bool node_defaults = is_keyword("node");
      shift();
      Attrs attrs = attr_lists();
      if (node_defaults) {
        for (auto& [k, v] : attrs) node_defaults_[k] = v;
      }
      return;
    }
    const DotLexer::Token first = tok_;
    shift();
    if (tok_.kind == DotLexer::Kind::equals) {  // graph attribute
      shift();
      if (tok_.kind != DotLexer::Kind::id) fail("expected attribute value");
      shift();
      return;
    }
    if (tok_.kind == DotLexer::Kind::edge_op) {
      std::vector<DotLexer::Token> chain{first};
      while (tok_.kind == DotLexer::Kind::edge_op) {
        shift();
        if (tok_.kind != DotLexer::Kind::id) fail("expected node id after edge operator");
        chain.push_back(tok_);
        shift();
          }
      attr_lists();
      for (const auto& t : chain) touch(t);
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (chain[i].text == chain[i + 1].text) continue;  // self-loops carry no overlap information
        edges_.emplace_back(chain[i].text, chain[i + 1].text);
      }
      return;
    }
    NodeInfo& info = touch(first);
    for (auto& [k, v] : attr_lists()) info.attrs[k] = v;
  }

  static double number(const std::pair<std::string, DotLexer::Token>& attr, const std::string& name) {
    const std::string& s = attr.first;
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
      DotLexer::fail(attr.second.line, attr.second.column, "attribute " + name + "=\"" + s + "\" is not a number");
    }
    return v;
  }

  GraphDocument build(const std::string& graph_id) {
    constexpr double kPointsPerInch = 72.0;
    std::vector<Node> nodes;
    std::unordered_map<std::string, Point> positions;
    std::vector<std::pair<std::size_t, const std::string*>> ordered;
    for (const auto& [id, info] : nodes_) ordered.emplace_back(info.order, &id);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [order, idp] : ordered) {
      const std::string& id = *idp;
      const NodeInfo& info = nodes_.at(id);
      const auto w = info.attrs.find("width");
      const auto h = info.attrs.find("height");
      const double win = w == info.attrs.end() ? 0.75 : number(w->second, "width");
      const double hin = h == info.attrs.end() ? 0.5 : number(h->second, "height");
      nodes.push_back({id, win * kPointsPerInch, hin * kPointsPerInch});
      const auto pos = info.attrs.find("pos");
      if (pos == info.attrs.end()) {
        DotLexer::fail(info.first_seen.line, info.first_seen.column, "node \"" + id + "\" has no pos attribute");
      }
      std::string s = pos->second.first;
      if (!s.empty() && s.back() == '!') s.pop_back();
      const auto comma = s.find(',');
      if (comma == std::string::npos) {
        DotLexer::fail(pos->second.second.line, pos->second.second.column, "pos=\"" + s + "\" is not \"x,y\"");
      }
      const double x = number({s.substr(0, comma), pos->second.second}, "pos.x");
      const double y = number({s.substr(comma + 1), pos->second.second}, "pos.y");
      positions[id] = {x, y};
    }
    GraphDocument out{SizedGraph(std::move(nodes), edges_, graph_id, DuplicateEdges::collapse), std::nullopt};
    out.embedding = Embedding::from_map(out.graph, positions);
    return out;
  }

  DotLexer lex_;
  DotLexer::Token tok_;
  std::map<std::string, NodeInfo> nodes_;
  Attrs node_defaults_;
  std::vector<NamedEdge> edges_;
};

}  // namespace detail

/// DOT subset: node statements with pos/width/height, edge chains with -- or
/// ->. Sizes are converted from inches to points so they share pos units.
inline GraphDocument read_graph_dot(std::string_view text) { return detail::DotParser(text).parse(); }

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string format_real(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, p);
}

inline std::string csv_header() {
  std::string h = "graph_id,generator,n,m,algorithm,seed,time_ms,fallback";
  for (const auto& d : kMetricCatalog) {
    h += ',';
    h += d.abbreviation;
  }
  h += ",error";
  return h;
}

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace detail

/// Undefined metrics are written as NA. With `mask_time`, time_ms is written
/// as 0 so that reruns compare byte for byte.
inline std::string write_records_csv(const std::vector<BenchRecord>& records, bool mask_time = false) {
  std::string out = csv_header() + "\n";
  for (const auto& r : records) {
    out += detail::csv_field(r.graph_id) + ',' + detail::csv_field(r.generator) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.m) + ',' + detail::csv_field(r.algorithm) + ',' + std::to_string(r.seed) + ',' +
           (mask_time ? std::string("0") : format_real(r.time_ms)) + ',' + (r.fallback ? "1" : "0");
    for (const auto& v : r.metrics.values()) {
      out += ',';
      out += v ? format_real(*v) : std::string("NA");
    }
    out += ',' + detail::csv_field(r.error) + '\n';
  }
  return out;
}

inline std::vector<BenchRecord> read_records_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto real = [&](const std::string& s, const char* what) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw ParseError("CSV line " + std::to_string(lineno) + ": bad " + what + " \"" + s + "\"");
    }
    return v;
  };
  auto integer = [&](const std::string& s, const char* what) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw ParseError("CSV line " + std::to_string(lineno) + ": bad " + what + " \"" + s + "\"");
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != csv_header()) throw ParseError("CSV line 1: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9 + kMetricCount) {
      throw ParseError("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(9 + kMetricCount) +
                       " fields, got " + std::to_string(f.size()));
    }
    BenchRecord r;
    r.graph_id = f[0];
    r.generator = f[1];
    r.n = integer(f[2], "n");
    r.m = integer(f[3], "m");
    r.algorithm = f[4];
    r.seed = integer(f[5], "seed");
    r.time_ms = real(f[6], "time_ms");
    r.fallback = f[7] == "1";
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      const std::string& s = f[8 + k];
      if (s != "NA") r.metrics[static_cast<Metric>(k)] = real(s, "metric value");
    }
    r.error = f[8 + kMetricCount];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace noverlap
