#include <doctest.h>

#include <random>
#include <sstream>

#include "../fixtures.hpp"
#include "../oracles.hpp"
#include "hiarg/amr.hpp"
#include "hiarg/error.hpp"

using namespace hiarg;

namespace {

std::multiset<std::string> node_texts(const AmrGraph& g) {
  std::multiset<std::string> out;
  for (const auto& n : g.nodes) out.insert(n.attr.text);
  return out;
}

std::size_t error_offset(const std::string& text) {
  try {
    parse_penman(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for " << text);
  return 0;
}

}  // namespace

TEST_CASE("parse kill graph") {
  auto g = parse_penman(fixture::kKillText);
  CHECK(node_texts(g) == std::multiset<std::string>{"kill-01", "gun", "person"});
  CHECK(g.edges.size() == 2);
  CHECK(g.root == "k");
  CHECK(g.find("k")->attr.kind == NodeKind::kFrameset);
  CHECK(g.find("g")->attr.kind == NodeKind::kConcept);
  std::set<std::string> labels;
  for (const auto& e : g.edges) labels.insert(e.label);
  CHECK(labels == std::set<std::string>{":ARG0", ":ARG1"});
}

TEST_CASE("parse single concept") {
  auto g = parse_penman("(g / gun)");
  CHECK(g.nodes.size() == 1);
  CHECK(g.edges.empty());
  CHECK(g.root == "g");
}

TEST_CASE("inverse role is kept as parsed") {
  auto g = parse_penman("(b / ban-01 :ARG1 (g / gun) :ARG1-of (r / recommend-01))");
  AmrGraph expected;
  expected.root = "b";
  expected.nodes = {{"b", concept_attr("ban-01")}, {"g", concept_attr("gun")},
                    {"r", concept_attr("recommend-01")}};
  expected.edges = {{"b", "g", ":ARG1"}, {"b", "r", ":ARG1-of"}};
  auto sorted = [](AmrGraph x) {
    std::sort(x.nodes.begin(), x.nodes.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(x.edges.begin(), x.edges.end());
    return x;
  };
  CHECK(sorted(g) == sorted(expected));
}

TEST_CASE("re-entrancy and constants") {
  auto g = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b :polarity -) :quant 5)");
  CHECK(g.nodes.size() == 5);
  CHECK(g.edges.size() == 5);
  std::size_t into_boy = 0;
  for (const auto& e : g.edges) into_boy += e.dst == "b";
  CHECK(into_boy == 2);
  const auto* neg = g.find("g.2");
  REQUIRE(neg != nullptr);
  CHECK(neg->attr == constant_attr("-"));
  CHECK(g.find("w.3")->attr == constant_attr("5"));
  CHECK(validate(g).ok());
}

TEST_CASE("quoted constants and alignment markers") {
  auto g = parse_penman("(c / city~e.3 :name (n / name :op1 \"New York\"~e.1))");
  CHECK(g.find("c")->attr.text == "city");
  CHECK(g.find("n.1")->attr == constant_attr("\"New York\""));
}

TEST_CASE("parse errors name an offset") {
  CHECK(error_offset("(a / b") == 0);
  CHECK(error_offset("(a / b :ARG0 (c / d)") == 0);
  CHECK(error_offset("(a / b))") == 7);
  // Conflicting redefinition.
  const std::string redefined = "(a / b :ARG0 (a / c))";
  CHECK(error_offset(redefined) == redefined.find("(a / c)") + 1);
  // Dangling reference.
  const std::string dangling = "(a / b :ARG0 x2)";
  CHECK(error_offset(dangling) == dangling.find("x2"));
  CHECK_THROWS_AS(parse_penman(""), ParseError);
}

TEST_CASE("same-concept redefinition is a re-entrancy") {
  auto g = parse_penman("(a / b :ARG0 (c / d) :ARG1 (c / d))");
  CHECK(g.nodes.size() == 2);
  CHECK(g.edges.size() == 2);
}

TEST_CASE("serialize") {
  CHECK(serialize_penman(parse_penman("(g / gun)")) == "(g0 / gun)");
  auto kill = parse_penman(fixture::kKillText);
  auto text = serialize_penman(kill);
  CHECK(oracle::isomorphic(parse_penman(text), kill));
  CHECK(serialize_penman(parse_penman(text)) == text);

  auto shared = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))");
  auto s = serialize_penman(shared);
  CHECK(std::count(s.begin(), s.end(), '/') == 3);  // one definition per node
  CHECK(oracle::isomorphic(parse_penman(s), shared));

  AmrGraph cyclic;
  cyclic.root = "a";
  cyclic.nodes = {{"a", concept_attr("x")}, {"b", concept_attr("y")}};
  cyclic.edges = {{"a", "b", ":ARG0"}, {"b", "a", ":ARG1"}};
  CHECK_THROWS_AS(serialize_penman(cyclic), InvalidGraph);
}

TEST_CASE("serialize round trip on random graphs") {
  std::mt19937_64 rng(11);
  oracle::RandomGraphOptions opt;
  opt.max_nodes = 12;
  opt.vocabulary = 8;
  for (int i = 0; i < 300; ++i) {
    auto g = oracle::random_graph(rng, opt);
    auto text = serialize_penman(g);
    auto back = parse_penman(text);
    REQUIRE_MESSAGE(oracle::isomorphic(back, g), text);
    CHECK(serialize_penman(g) == text);
  }
}

TEST_CASE("invert_edge") {
  CHECK(invert_edge({"a", "b", ":ARG0"}) == AmrEdge{"b", "a", ":ARG0-of"});
  CHECK(invert_edge({"b", "a", ":ARG1-of"}) == AmrEdge{"a", "b", ":ARG1"});
  CHECK(invert_edge({"r", "s", ":snt"}) == AmrEdge{"s", "r", ":snt-of"});
  for (const char* label : {":ARG0", ":mod-of", ":consist-of", ":x", ":-of"}) {
    AmrEdge e{"p", "q", label};
    CHECK(invert_edge(invert_edge(e)) == e);
  }
}

TEST_CASE("validate") {
  CHECK(validate(parse_penman(fixture::kKillText)).ok());

  AmrGraph cyc;
  cyc.root = "a";
  cyc.nodes = {{"a", concept_attr("x")}, {"b", concept_attr("y")}};
  cyc.edges = {{"a", "b", ":ARG0"}, {"b", "a", ":ARG0"}};
  auto report = validate(cyc);
  REQUIRE(report.has(Violation::Kind::kCycle));
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::kCycle) {
      CHECK(v.nodes == std::vector<std::string>{"a", "b", "a"});
    }
  }

  auto detached = parse_penman(fixture::kKillText);
  detached.nodes.push_back({"z", concept_attr("extra")});
  report = validate(detached);
  REQUIRE(report.has(Violation::Kind::kUnreachable));
  CHECK(report.violations.size() == 1);
  CHECK(report.violations[0].nodes == std::vector<std::string>{"z"});

  auto bad_label = parse_penman(fixture::kKillText);
  bad_label.edges[0].label = ":ARG0-of-of";
  CHECK(validate(bad_label).has(Violation::Kind::kBadLabel));
  bad_label.edges[0].label = "ARG0";
  CHECK(validate(bad_label).has(Violation::Kind::kBadLabel));

  AmrGraph empty;
  CHECK(validate(empty).has(Violation::Kind::kEmptyGraph));
}

TEST_CASE("validate agrees with the closure oracle") {
  std::mt19937_64 rng(5);
  oracle::RandomGraphOptions opt;
  opt.max_nodes = 10;
  opt.constant_probability = 0.0;
  std::size_t rejected = 0;
  for (int i = 0; i < 600; ++i) {
    auto g = oracle::random_graph(rng, opt);
    // Perturb: random extra edges (may create cycles) or detached nodes.
    const auto n = g.nodes.size();
    if (rng() % 2 && n > 1) {
      g.edges.push_back({g.nodes[rng() % n].id, g.nodes[rng() % n].id, ":mod"});
    }
    if (rng() % 4 == 0) g.nodes.push_back({"x" + std::to_string(i), concept_attr("lonely")});
    auto report = validate(g);
    const bool cyc = oracle::has_cycle(g);
    const auto unreach = oracle::unreachable(g);
    CHECK(report.has(Violation::Kind::kCycle) == cyc);
    CHECK(report.has(Violation::Kind::kUnreachable) == !unreach.empty());
    CHECK(report.ok() == oracle::admissible(g));
    rejected += !report.ok();
  }
  CHECK(rejected > 100);
}

TEST_CASE("normalize_orientation keeps the graph admissible") {
  auto g = parse_penman("(b / ban-01 :ARG1 (g / gun) :ARG1-of (r / recommend-01))");
  // Inverting b->r would orphan r, so nothing changes.
  CHECK(normalize_orientation(g) == 0);

  AmrGraph h;
  h.root = "a";
  h.nodes = {{"a", concept_attr("x")}, {"b", concept_attr("y")}, {"c", concept_attr("z")}};
  h.edges = {{"a", "b", ":ARG0"}, {"a", "c", ":ARG1"}, {"c", "b", ":mod-of"}};
  CHECK(normalize_orientation(h) == 1);
  CHECK(validate(h).ok());
  CHECK(std::find(h.edges.begin(), h.edges.end(), AmrEdge{"b", "c", ":mod"}) != h.edges.end());
}

TEST_CASE("alignments") {
  auto a = parse_alignment("w:0-1 r:1-2 b:2-3 g:3-4 g:5-6");
  CHECK(a.at("g").size() == 2);
  CHECK(format_alignment(a) == "b:2-3 g:3-4 g:5-6 r:1-2 w:0-1");
  CHECK(normalize_spans({{3, 5}, {0, 1}, {4, 6}}) == std::vector<TokenSpan>{{0, 1}, {3, 6}});
  auto g = parse_penman(fixture::kRecommendText);
  CHECK(check_alignment(a, g, 6).empty());
  CHECK_FALSE(check_alignment(a, g, 5).empty());
  CHECK_FALSE(check_alignment(parse_alignment("q:0-1"), g, 6).empty());
  CHECK_THROWS_AS(parse_alignment("g:3"), ParseError);
  CHECK_THROWS_AS(parse_alignment("g:4-3"), ParseError);
}

TEST_CASE("penman blocks") {
  std::istringstream in(
      "# ::id d1#0\n# ::snt We should ban guns.\n# ::alignments w:0-1 g:3-4\n"
      "(r / recommend-01\n   :ARG1 (b / ban-01 :ARG0 (w / we) :ARG1 (g / gun)))\n\n"
      "# a comment\n# ::id d1#1 ::snt Guns kill people.\n" +
      std::string(fixture::kKillText) + "\n");
  auto blocks = read_penman_blocks(in);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].id == "d1#0");
  CHECK(blocks[0].sentence == "We should ban guns.");
  CHECK(*blocks[0].alignments == "w:0-1 g:3-4");
  CHECK(parse_penman(blocks[0].graph_text).nodes.size() == 4);
  CHECK(blocks[1].id == "d1#1");
  CHECK(blocks[1].sentence == "Guns kill people.");
  CHECK_FALSE(blocks[1].alignments.has_value());

  std::istringstream again(format_penman_block(blocks[0]));
  auto round = read_penman_blocks(again);
  REQUIRE(round.size() == 1);
  CHECK(round[0].id == blocks[0].id);
  CHECK(round[0].sentence == blocks[0].sentence);
  CHECK(round[0].alignments == blocks[0].alignments);
}
