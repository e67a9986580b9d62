#include "hiarg/amr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hiarg/error.hpp"
#include "hiarg/rng.hpp"

namespace hiarg {

namespace {

constexpr std::string_view kPassive = "-of";

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kConcept:
      return "concept";
    case NodeKind::kFrameset:
      return "frameset";
    case NodeKind::kConstant:
      return "constant";
  }
  return "concept";
}

NodeKind node_kind_from_string(std::string_view s) {
  if (s == "concept") return NodeKind::kConcept;
  if (s == "frameset") return NodeKind::kFrameset;
  if (s == "constant") return NodeKind::kConstant;
  throw Error("unknown node kind '" + std::string(s) + "'");
}

bool is_frameset_text(std::string_view text) {
  // word(-word)*-NN
  if (text.size() < 4) return false;
  const auto n = text.size();
  if (!std::isdigit(static_cast<unsigned char>(text[n - 1])) ||
      !std::isdigit(static_cast<unsigned char>(text[n - 2])) ||
      text[n - 3] != '-') {
    return false;
  }
  std::string_view words = text.substr(0, n - 3);
  if (words.empty() || words.front() == '-' || words.back() == '-') {
    return false;
  }
  bool prev_dash = false;
  for (unsigned char c : words) {
    if (c == '-') {
      if (prev_dash) return false;
      prev_dash = true;
    } else if (std::isalnum(c) || c == '_' || c == '\'') {
      prev_dash = false;
    } else {
      return false;
    }
  }
  return true;
}

NodeAttr concept_attr(std::string text) {
  NodeKind kind =
      is_frameset_text(text) ? NodeKind::kFrameset : NodeKind::kConcept;
  return NodeAttr{kind, std::move(text)};
}

NodeAttr constant_attr(std::string text) {
  return NodeAttr{NodeKind::kConstant, std::move(text)};
}

const AmrNode* AmrGraph::find(std::string_view id) const {
  for (const auto& node : nodes) {
    if (node.id == id) return &node;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Edge inversion

bool is_inverse_label(std::string_view label) {
  return ends_with(label, kPassive);
}

std::string invert_label(std::string_view label) {
  if (is_inverse_label(label)) {
    return std::string(label.substr(0, label.size() - kPassive.size()));
  }
  return std::string(label) + std::string(kPassive);
}

AmrEdge invert_edge(const AmrEdge& edge) {
  return AmrEdge{edge.dst, edge.src, invert_label(edge.label)};
}

// ---------------------------------------------------------------------------
// Alignments

std::vector<TokenSpan> normalize_spans(std::vector<TokenSpan> spans) {
  std::sort(spans.begin(), spans.end());
  std::vector<TokenSpan> out;
  for (const auto& s : spans) {
    if (!out.empty() && s.start < out.back().end) {
      out.back().end = std::max(out.back().end, s.end);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

Alignment parse_alignment(std::string_view text) {
  Alignment out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[end]))) {
      ++end;
    }
    std::string_view entry = text.substr(pos, end - pos);
    auto colon = entry.rfind(':');
    auto dash = entry.rfind('-');
    if (colon == std::string_view::npos || colon == 0 ||
        dash == std::string_view::npos || dash < colon) {
      throw ParseError("malformed alignment entry '" + std::string(entry) + "'",
                       pos);
    }
    auto parse_num = [&](std::string_view digits) -> std::uint32_t {
      if (digits.empty() ||
          !std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
            return std::isdigit(c) != 0;
          })) {
        throw ParseError(
            "malformed alignment range in '" + std::string(entry) + "'", pos);
      }
      return static_cast<std::uint32_t>(std::stoul(std::string(digits)));
    };
    TokenSpan span{parse_num(entry.substr(colon + 1, dash - colon - 1)),
                   parse_num(entry.substr(dash + 1))};
    if (span.end <= span.start) {
      throw ParseError("empty alignment range in '" + std::string(entry) + "'",
                       pos);
    }
    out[std::string(entry.substr(0, colon))].push_back(span);
    pos = end;
  }
  for (auto& [id, spans] : out) spans = normalize_spans(std::move(spans));
  return out;
}

std::string format_alignment(const Alignment& alignment) {
  std::string out;
  for (const auto& [id, spans] : alignment) {
    for (const auto& s : spans) {
      if (!out.empty()) out += ' ';
      out += id + ":" + std::to_string(s.start) + "-" + std::to_string(s.end);
    }
  }
  return out;
}

std::string check_alignment(const Alignment& alignment, const AmrGraph& graph,
                            std::size_t token_count) {
  for (const auto& [id, spans] : alignment) {
    if (graph.find(id) == nullptr) return "alignment names unknown node " + id;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto& s = spans[i];
      if (s.start >= s.end || s.end > token_count) {
        return "alignment span " + std::to_string(s.start) + "-" +
               std::to_string(s.end) + " of " + id + " outside " +
               std::to_string(token_count) + " tokens";
      }
      if (i > 0 && spans[i - 1].end > s.start) {
        return "overlapping alignment spans for " + id;
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Penman parsing

namespace {

bool looks_like_variable(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) {
    return false;
  }
  return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// Strips ISI-style surface alignment markers (`kill-01~e.2`).
std::string_view strip_marker(std::string_view token) {
  if (!token.empty() && token.front() == '"') return token;
  auto tilde = token.find('~');
  return tilde == std::string_view::npos ? token : token.substr(0, tilde);
}

class PenmanParser {
 public:
  explicit PenmanParser(std::string_view text) : text_(text) {}

  AmrGraph parse() {
    skip_space_and_comments();
    if (pos_ >= text_.size()) throw ParseError("empty Penman text", pos_);
    graph_.root = parse_node();
    skip_space_and_comments();
    if (pos_ != text_.size()) {
      throw ParseError("trailing text after graph", pos_);
    }
    // Resolve atoms: defined variables are references, the rest constants.
    for (const auto& atom : atoms_) {
      if (!atom.quoted && defined_.count(atom.text)) {
        graph_.edges.push_back({atom.parent, atom.text, atom.label});
        continue;
      }
      if (!atom.quoted && looks_like_variable(atom.text)) {
        throw ParseError("dangling variable reference '" + atom.text + "'",
                         atom.offset);
      }
      graph_.nodes.push_back({atom.id, constant_attr(atom.text)});
      graph_.edges.push_back({atom.parent, atom.id, atom.label});
    }
    return std::move(graph_);
  }

 private:
  struct Atom {
    std::string parent;
    std::string label;
    std::string text;
    std::string id;
    bool quoted;
    std::size_t offset;
  };

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string_view read_token() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
          c == ')' || c == '"') {
        break;
      }
      // A role marker starts a new token.
      if (c == ':' && pos_ > start) break;
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::string read_quoted() {
    std::size_t start = pos_;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ >= text_.size()) throw ParseError("unterminated string", start);
    ++pos_;
    std::string quoted(text_.substr(start, pos_ - start));
    // Drop any trailing ~e.N marker.
    if (pos_ < text_.size() && text_[pos_] == '~') read_token();
    return quoted;
  }

  std::string parse_node() {
    if (pos_ >= text_.size() || text_[pos_] != '(') {
      throw ParseError("expected '('", pos_);
    }
    std::size_t open = pos_;
    ++pos_;
    skip_space();
    std::size_t var_offset = pos_;
    std::string var(strip_marker(read_token()));
    if (var.empty()) throw ParseError("expected variable", var_offset);
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '/') {
      throw ParseError("expected '/' after variable '" + var + "'", pos_);
    }
    ++pos_;
    skip_space();
    std::size_t concept_offset = pos_;
    std::string concept_text;
    if (pos_ < text_.size() && text_[pos_] == '"') {
      concept_text = read_quoted();
    } else {
      concept_text = std::string(strip_marker(read_token()));
    }
    if (concept_text.empty() || concept_text.front() == ':') {
      throw ParseError("expected concept for '" + var + "'", concept_offset);
    }
    auto [it, inserted] = defined_.emplace(var, concept_text);
    if (!inserted) {
      if (it->second != concept_text) {
        throw ParseError("variable '" + var + "' redefined as '" +
                             concept_text + "' (was '" + it->second + "')",
                         var_offset);
      }
    } else {
      graph_.nodes.push_back({var, concept_attr(concept_text)});
    }

    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        throw ParseError("unbalanced parenthesis", open);
      }
      char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        return var;
      }
      if (c != ':') {
        throw ParseError("expected role or ')'", pos_);
      }
      std::size_t role_offset = pos_;
      std::string label(strip_marker(read_token()));
      if (label.size() < 2) throw ParseError("empty role", role_offset);
      std::size_t role_index = ++role_counts_[var];
      skip_space();
      if (pos_ >= text_.size()) {
        throw ParseError("unbalanced parenthesis", open);
      }
      if (text_[pos_] == '(') {
        std::string child = parse_node();
        graph_.edges.push_back({var, child, label});
      } else {
        std::size_t atom_offset = pos_;
        Atom atom;
        atom.parent = var;
        atom.label = label;
        atom.offset = atom_offset;
        atom.id = var + "." + std::to_string(role_index);
        if (text_[pos_] == '"') {
          atom.text = read_quoted();
          atom.quoted = true;
        } else {
          atom.text = std::string(strip_marker(read_token()));
          atom.quoted = false;
          if (atom.text.empty()) {
            throw ParseError("expected value for role " + label, atom_offset);
          }
        }
        atoms_.push_back(std::move(atom));
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  AmrGraph graph_;
  std::unordered_map<std::string, std::string> defined_;
  std::unordered_map<std::string, std::size_t> role_counts_;
  std::vector<Atom> atoms_;
};

}  // namespace

AmrGraph parse_penman(std::string_view text) {
  return PenmanParser(text).parse();
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kEmptyGraph:
      return "empty-graph";
    case Violation::Kind::kMissingRoot:
      return "missing-root";
    case Violation::Kind::kDuplicateNode:
      return "duplicate-node";
    case Violation::Kind::kDanglingEdge:
      return "dangling-edge";
    case Violation::Kind::kCycle:
      return "cycle";
    case Violation::Kind::kUnreachable:
      return "unreachable";
    case Violation::Kind::kBadLabel:
      return "bad-label";
    case Violation::Kind::kBadAttr:
      return "bad-attr";
  }
  return "unknown";
}

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

namespace {

// Index-based adjacency over the nodes that exist; dangling edges are dropped.
struct Adjacency {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> out;
};

Adjacency build_adjacency(const AmrGraph& g) {
  Adjacency adj;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    adj.index.emplace(g.nodes[i].id, i);
  }
  adj.out.resize(g.nodes.size());
  for (const auto& e : g.edges) {
    auto s = adj.index.find(e.src);
    auto d = adj.index.find(e.dst);
    if (s == adj.index.end() || d == adj.index.end()) continue;
    adj.out[s->second].push_back(d->second);
  }
  return adj;
}

std::vector<bool> reachable_from(const Adjacency& adj, std::size_t root) {
  std::vector<bool> seen(adj.out.size(), false);
  std::vector<std::size_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : adj.out[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Returns one witness cycle (first node repeated at the end), or empty.
std::vector<std::size_t> find_cycle(const Adjacency& adj) {
  const auto n = adj.out.size();
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> color(n, kWhite);
  std::vector<std::size_t> parent(n, SIZE_MAX);
  for (std::size_t start = 0; start < n; ++start) {
    if (color[start] != kWhite) continue;
    // Iterative DFS with explicit child cursor.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    color[start] = kGrey;
    while (!stack.empty()) {
      auto& [u, cursor] = stack.back();
      if (cursor < adj.out[u].size()) {
        auto v = adj.out[u][cursor++];
        if (color[v] == kGrey) {
          std::vector<std::size_t> path{v};
          for (auto w = u; w != v; w = parent[w]) path.push_back(w);
          std::reverse(path.begin() + 1, path.end());
          path.push_back(v);
          return path;
        }
        if (color[v] == kWhite) {
          color[v] = kGrey;
          parent[v] = u;
          stack.push_back({v, 0});
        }
      } else {
        color[u] = kBlack;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

ValidationReport validate(const AmrGraph& graph) {
  using K = Violation::Kind;
  ValidationReport report;
  auto add = [&](K kind, std::string message,
                 std::vector<std::string> nodes = {}) {
    report.violations.push_back({kind, std::move(message), std::move(nodes)});
  };

  if (graph.nodes.empty()) {
    add(K::kEmptyGraph, "graph has no nodes");
    return report;
  }

  std::unordered_set<std::string> ids;
  for (const auto& node : graph.nodes) {
    if (!ids.insert(node.id).second) {
      add(K::kDuplicateNode, "duplicate node id " + node.id, {node.id});
    }
    const auto& text = node.attr.text;
    if (text.empty() || has_space(text)) {
      add(K::kBadAttr, "node " + node.id + " has empty or spaced text",
          {node.id});
    } else if (node.attr.kind == NodeKind::kFrameset &&
               !is_frameset_text(text)) {
      add(K::kBadAttr, "node " + node.id + " is not a frameset: " + text,
          {node.id});
    }
  }

  for (const auto& e : graph.edges) {
    if (!ids.count(e.src) || !ids.count(e.dst)) {
      add(K::kDanglingEdge,
          "edge " + e.src + " " + e.label + " " + e.dst + " has no endpoint",
          {e.src, e.dst});
    }
    if (e.label.size() < 2 || e.label.front() != ':' || has_space(e.label) ||
        ends_with(e.label, "-of-of")) {
      add(K::kBadLabel, "bad edge label '" + e.label + "'", {e.src, e.dst});
    }
    if (const auto* src = graph.find(e.src);
        src != nullptr && src->attr.kind == NodeKind::kConstant) {
      add(K::kBadAttr, "constant " + e.src + " has an outgoing edge", {e.src});
    }
  }

  auto adj = build_adjacency(graph);
  auto cycle = find_cycle(adj);
  if (!cycle.empty()) {
    std::vector<std::string> path;
    std::string text;
    for (auto i : cycle) {
      path.push_back(graph.nodes[i].id);
      text += (text.empty() ? "" : " -> ") + graph.nodes[i].id;
    }
    add(K::kCycle, "cycle " + text, std::move(path));
  }

  auto root = adj.index.find(graph.root);
  if (root == adj.index.end()) {
    add(K::kMissingRoot, "root '" + graph.root + "' is not a node");
    return report;
  }
  auto seen = reachable_from(adj, root->second);
  std::vector<std::string> lost;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) lost.push_back(graph.nodes[i].id);
  }
  if (!lost.empty()) {
    std::string text;
    for (const auto& id : lost) text += " " + id;
    add(K::kUnreachable, "unreachable from root:" + text, std::move(lost));
  }
  return report;
}

std::size_t normalize_orientation(AmrGraph& graph) {
  std::size_t inverted = 0;
  for (auto& edge : graph.edges) {
    if (!is_inverse_label(edge.label)) continue;
    AmrEdge saved = edge;
    edge = invert_edge(edge);
    auto adj = build_adjacency(graph);
    auto root = adj.index.find(graph.root);
    bool keep = root != adj.index.end() && find_cycle(adj).empty();
    if (keep) {
      auto seen = reachable_from(adj, root->second);
      keep = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }
    if (keep) {
      ++inverted;
    } else {
      edge = saved;
    }
  }
  return inverted;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_penman(const AmrGraph& graph) {
  auto report = validate(graph);
  if (!report.ok()) {
    throw InvalidGraph("cannot serialize: " + report.violations[0].message);
  }
  auto adj = build_adjacency(graph);
  const auto n = graph.nodes.size();

  std::vector<std::size_t> indegree(n, 0);
  for (const auto& out : adj.out) {
    for (auto v : out) ++indegree[v];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = graph.nodes[i];
    if (node.attr.kind != NodeKind::kConstant) continue;
    if (indegree[i] > 1) {
      throw InvalidGraph("constant " + node.id + " is shared");
    }
    if (adj.index.at(graph.root) == i) {
      throw InvalidGraph("constant " + node.id + " cannot be the root");
    }
    if (node.attr.text.front() != '"' && looks_like_variable(node.attr.text)) {
      throw InvalidGraph("constant '" + node.attr.text +
                         "' would read back as a variable");
    }
  }

  // Child lists with labels, in edge order.
  std::vector<std::vector<std::pair<std::string, std::size_t>>> children(n);
  for (const auto& e : graph.edges) {
    children[adj.index.at(e.src)].push_back({e.label, adj.index.at(e.dst)});
  }

  // Bottom-up structural signature; the graph is acyclic.
  std::vector<std::uint64_t> sig(n, 0);
  std::vector<bool> done(n, false);
  std::function<std::uint64_t(std::size_t)> signature =
      [&](std::size_t u) -> std::uint64_t {
    if (done[u]) return sig[u];
    std::vector<std::pair<std::string, std::uint64_t>> parts;
    for (const auto& [label, v] : children[u]) {
      parts.push_back({label, signature(v)});
    }
    std::sort(parts.begin(), parts.end());
    std::string key(to_string(graph.nodes[u].attr.kind));
    key += '\x1f' + graph.nodes[u].attr.text;
    for (const auto& [label, h] : parts) {
      key += '\x1e' + label + '\x1f' + std::to_string(h);
    }
    sig[u] = fnv1a64(key);
    done[u] = true;
    return sig[u];
  };
  for (std::size_t i = 0; i < n; ++i) signature(i);

  for (auto& list : children) {
    std::stable_sort(list.begin(), list.end(),
                     [&](const auto& a, const auto& b) {
                       if (a.first != b.first) return a.first < b.first;
                       return sig[a.second] < sig[b.second];
                     });
  }

  std::vector<std::string> var(n);
  std::size_t counter = 0;
  std::string out;
  std::function<void(std::size_t)> emit = [&](std::size_t u) {
    const auto& text = graph.nodes[u].attr.text;
    char initial = 'x';
    if (!text.empty() && std::isalpha(static_cast<unsigned char>(text[0]))) {
      initial = static_cast<char>(std::tolower(static_cast<unsigned char>(text[0])));
    }
    var[u] = std::string(1, initial) + std::to_string(counter++);
    out += "(" + var[u] + " / " + text;
    for (const auto& [label, v] : children[u]) {
      out += " " + label + " ";
      if (graph.nodes[v].attr.kind == NodeKind::kConstant) {
        out += graph.nodes[v].attr.text;
      } else if (!var[v].empty()) {
        out += var[v];
      } else {
        emit(v);
      }
    }
    out += ")";
  };
  emit(adj.index.at(graph.root));
  return out;
}

// ---------------------------------------------------------------------------
// Penman files

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

void parse_metadata_line(std::string_view line, PenmanBlock& block) {
  // `# ::key value ::key value`; `snt`, `tok` and `alignments` take the rest
  // of the line.
  auto pos = line.find("::");
  while (pos != std::string_view::npos) {
    auto key_start = pos + 2;
    auto key_end = key_start;
    while (key_end < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[key_end]))) {
      ++key_end;
    }
    std::string key(line.substr(key_start, key_end - key_start));
    std::size_t next = std::string_view::npos;
    if (key != "snt" && key != "tok" && key != "alignments") {
      next = line.find(" ::", key_end);
      if (next != std::string_view::npos) ++next;
    }
    std::string value = trim(line.substr(
        key_end, next == std::string_view::npos ? std::string_view::npos
                                                : next - key_end));
    if (key == "id") {
      block.id = value;
    } else if (key == "snt") {
      block.sentence = value;
    } else if (key == "alignments") {
      block.alignments = value;
    }
    block.metadata[key] = value;
    pos = next;
  }
}

}  // namespace

std::vector<PenmanBlock> read_penman_blocks(std::istream& in) {
  std::vector<PenmanBlock> blocks;
  PenmanBlock current;
  bool open = false;
  std::string line;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (open && !trim(current.graph_text).empty()) {
      current.graph_text = trim(current.graph_text);
      blocks.push_back(std::move(current));
    }
    current = PenmanBlock{};
    open = false;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (!open) {
      open = true;
      current.line = lineno;
    }
    if (line.rfind("#", 0) == 0) {
      parse_metadata_line(line, current);
    } else {
      current.graph_text += line;
      current.graph_text += '\n';
    }
  }
  flush();
  return blocks;
}

std::string format_penman_block(const PenmanBlock& block) {
  std::string out;
  out += "# ::id " + block.id + "\n";
  if (!block.sentence.empty()) out += "# ::snt " + block.sentence + "\n";
  if (block.alignments) out += "# ::alignments " + *block.alignments + "\n";
  out += block.graph_text + "\n";
  return out;
}

}  // namespace hiarg
