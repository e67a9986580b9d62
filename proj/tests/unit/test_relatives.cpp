#include <doctest.h>

#include <random>
#include <sstream>

#include "../fixtures.hpp"
#include "../oracles.hpp"
#include "hiarg/error.hpp"
#include "hiarg/relatives.hpp"

using namespace hiarg;

namespace {

std::set<std::string> texts(const HiArg& s, const std::vector<NodeId>& ids) {
  std::set<std::string> out;
  for (auto id : ids) out.insert(s.nodes().at(id).text);
  return out;
}

// Sentences that all mention `gun` but have distinct tops.
std::string gun_graph(int i) {
  return "(k / kill-01 :ARG0 (g / gun) :ARG1 (p / person :mod (n / n" + std::to_string(i) + ")))";
}

}  // namespace

TEST_CASE("sentence-node graph of the two-sentence store") {
  auto s = fixture::ban_kill_store();
  auto g = build_sn_graph(s);
  REQUIRE(g.link_count() == 2);
  CHECK(texts(s, g.adjacent_nodes(g.link_of("d1#0"))) ==
        std::set<std::string>{"recommend-01", "ban-01", "we", "gun"});
  CHECK(texts(s, g.adjacent_nodes(g.link_of("d1#1"))) ==
        std::set<std::string>{"kill-01", "gun", "person"});
  NodeId gun = 0;
  for (const auto& [id, attr] : s.nodes())
    if (attr.text == "gun") gun = id;
  CHECK(g.node_degree(gun) == 2);
  CHECK(g.adjacent_links(gun) == std::vector<std::uint32_t>{0, 1});
  CHECK_THROWS_AS(g.link_of("nope"), UnknownId);
}

TEST_CASE("single sentence store") {
  HiArg s;
  s.add_sentence(fixture::record("a", "x", "d", 0), parse_penman(fixture::kKillText));
  auto g = build_sn_graph(s);
  CHECK(g.link_count() == 1);
  CHECK(g.adjacent_nodes(0).size() == 3);
  CHECK(g.link_degree(0) == 3);
}

TEST_CASE("degree cap deactivates nodes") {
  std::vector<std::string> ids;
  std::vector<std::vector<NodeId>> adj;
  for (int i = 0; i < 501; ++i) {
    ids.push_back("s" + std::to_string(i));
    adj.push_back({7, static_cast<NodeId>(1000 + i)});
  }
  SentenceNodeGraph g(ids, adj, 500);
  CHECK(g.node_degree(7) == 501);
  CHECK_FALSE(g.node_active(7));
  CHECK(g.node_active(1000));
  CHECK(g.link_degree(0) == 1);
  CHECK(two_hop_similarity(g, 0, 1) == 0.0);
  adj.pop_back();
  ids.pop_back();
  SentenceNodeGraph h(ids, adj, 500);
  CHECK(h.node_active(7));
  CHECK(two_hop_similarity(h, 0, 1) == doctest::Approx(0.5 / 500));
}

TEST_CASE("two-hop similarity examples") {
  // Node ids: x = 1, y = 2.
  SentenceNodeGraph g({"a", "b"}, {{1, 2}, {2}}, 500);
  CHECK(two_hop_similarity(g, 0, 1) == 0.25);
  CHECK(two_hop_similarity(g, 1, 0) == 0.5);

  SentenceNodeGraph disjoint({"a", "b"}, {{1}, {2}}, 500);
  CHECK(two_hop_similarity(disjoint, 0, 1) == 0.0);

  SentenceNodeGraph pair({"a", "b"}, {{2}, {2}}, 500);
  CHECK(two_hop_similarity(pair, 0, 1) == 0.5);
  auto dist = two_hop_distribution(pair, 0);
  CHECK(dist[0] + dist[1] == 1.0);
}

TEST_CASE("two-hop similarity matches path enumeration") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 100; ++round) {
    oracle::Bipartite b;
    const auto links = 1 + rng() % 25;
    const auto nodes = 1 + rng() % 25;
    b.cap = 1 + rng() % 6;
    std::vector<std::string> ids;
    for (std::size_t l = 0; l < links; ++l) {
      ids.push_back("s" + std::to_string(l));
      std::vector<std::uint32_t> adj;
      const auto deg = rng() % 6;
      for (std::size_t k = 0; k < deg; ++k) adj.push_back(static_cast<std::uint32_t>(rng() % nodes));
      b.link_nodes.push_back(adj);
    }
    SentenceNodeGraph g(ids, b.link_nodes, b.cap);
    auto p = oracle::walk_matrix(b);
    for (std::uint32_t a = 0; a < links; ++a) {
      auto dist = two_hop_distribution(g, a);
      double total = 0.0;
      for (std::uint32_t c = 0; c < links; ++c) {
        CHECK(std::abs(two_hop_similarity(g, a, c) - p[a][c]) < 1e-12);
        CHECK(std::abs(dist[c] - p[a][c]) < 1e-12);
        total += dist[c];
      }
      if (g.link_active(a)) CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("candidate constraints") {
  HiArg s;
  auto add = [&](const std::string& doc, std::uint32_t pos, const std::string& graph,
                 const std::string& conclusion = "ban guns", bool hint = false) {
    auto rec = fixture::record(doc + "#" + std::to_string(pos), "t", doc, pos, Stance::kPro, conclusion);
    rec.is_hint = hint;
    s.add_sentence(rec, parse_penman(graph));
    return rec.id;
  };
  auto anchor = add("d", 10, gun_graph(1));
  auto near = add("d", 20, gun_graph(2));
  auto far = add("d", 50, gun_graph(3));
  add("d", 41, gun_graph(4));               // gap exactly 31: excluded
  auto edge2 = add("d", 42, gun_graph(5));   // gap 32: included
  auto same_top = add("d", 90, gun_graph(1));
  auto other_doc = add("e", 11, gun_graph(6));
  auto other_topic = add("f", 99, gun_graph(7), "other topic");
  auto hint = add("g", 0, gun_graph(8), "ban guns", true);
  auto unrelated = add("h", 70, "(p / protect-01)");
  s.merge();
  auto g = build_sn_graph(s);
  std::set<std::string> got;
  for (const auto& c : candidate_pairs(s, g, anchor)) {
    CHECK(c.anchor == anchor);
    CHECK(c.similarity > 0.0);
    got.insert(c.relative);
  }
  CHECK(got == std::set<std::string>{far, edge2, other_doc, hint});
  CHECK(candidate_pairs(s, g, hint).empty());
  CHECK(candidate_pairs(s, g, unrelated).empty());
  got.clear();
  for (const auto& c : candidate_pairs(s, g, near)) got.insert(c.relative);
  CHECK(got == std::set<std::string>{same_top, other_doc, hint});
  CHECK(candidate_pairs(s, g, other_topic).empty());
  CHECK_THROWS_AS(candidate_pairs(s, g, "zzz"), UnknownId);

  CandidateOptions sym;
  sym.symmetric = true;
  for (const auto& c : candidate_pairs(s, g, anchor, sym)) {
    auto a = g.link_of(anchor), b = g.link_of(c.relative);
    CHECK(c.similarity == doctest::Approx(0.5 * (two_hop_similarity(g, a, b) + two_hop_similarity(g, b, a))));
  }
}

TEST_CASE("sample_relatives") {
  std::vector<RelativeCandidate> one{{"a", "b", 0.2}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(sample_relatives(one, 1, seed) == std::vector<std::string>{"b"});
  }
  CHECK(sample_relatives({}, 1, 3).empty());
  std::vector<RelativeCandidate> two{{"a", "x", 0.3}, {"a", "y", 0.1}};
  CHECK(sample_relatives(two, 5, 1).size() == 2);
  std::size_t first = 0;
  const std::size_t trials = 100000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) first += sample_relatives(two, 1, seed)[0] == "x";
  CHECK(std::abs(static_cast<double>(first) / trials - 0.75) < 0.02);
  CHECK(sample_relatives(two, 1, 77) == sample_relatives(two, 1, 77));
}

TEST_CASE("rsd_label") {
  auto a = fixture::record("a", "t", "d", 1, Stance::kPro, "ban guns");
  auto same = fixture::record("b", "t", "e", 1, Stance::kPro, "ban guns");
  auto opposite = fixture::record("c", "t", "e", 2, Stance::kCon, "ban guns");
  auto other = fixture::record("d", "t", "f", 1, Stance::kPro, "tax sugar");
  CHECK(rsd_label(a, same) == StanceLabel::kSupporting);
  CHECK(rsd_label(a, opposite) == StanceLabel::kAttacking);
  CHECK(rsd_label(a, other) == StanceLabel::kNonRelevant);
  auto none = fixture::record("e", "t", "f", 1, Stance::kNone, "ban guns");
  CHECK_THROWS_AS(rsd_label(a, none), Error);
  CHECK(stance_label_from_string(to_string(StanceLabel::kAttacking)) == StanceLabel::kAttacking);
}

TEST_CASE("assignment files") {
  std::vector<RelativeAssignment> v{{"a#1", "b#40", 0.125, StanceLabel::kSupporting},
                                    {"a#2", "c#3", 1.0 / 3.0, StanceLabel::kNonRelevant}};
  std::stringstream buf;
  write_assignments(buf, v);
  CHECK(read_assignments(buf) == v);
}
