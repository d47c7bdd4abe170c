#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "modx/core/canonical.h"
#include "modx/core/errors.h"
#include "modx/core/json_io.h"
#include "modx/translation/alignment.h"
#include "modx/translation/concept_map.h"
#include "modx/translation/constraint_rewrite.h"
#include "modx/translation/doc_path.h"
#include "modx/translation/embedder.h"
#include "support/listing_docs.h"
#include "support/oracles.h"

using namespace modx::core;
using namespace modx::translation;
using namespace modx::test;

namespace {

std::string fixture(const std::string& name) { return std::string(MODX_FIXTURES_DIR) + "/" + name; }

// Gram-Schmidt over a seeded Gaussian matrix: a deterministic random
// orthogonal map, the oracle for alignment recovery.
std::vector<Vec> random_orthogonal(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> rows(d, Vec(d));
  for (auto& row : rows) {
    for (auto& x : row) x = gauss(rng);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += rows[i][k] * rows[j][k];
      for (std::size_t k = 0; k < d; ++k) rows[i][k] -= dot * rows[j][k];
    }
    double norm = 0.0;
    for (double x : rows[i]) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : rows[i]) x /= norm;
  }
  return rows;
}

Vec matvec(const std::vector<Vec>& m, const Vec& v) {
  Vec out(m.size(), 0.0);
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  }
  return out;
}

std::size_t count_leaves(const DocValue& doc) {
  if (doc.is_array()) {
    std::size_t n = 0;
    for (const auto& item : doc.as_array()) n += count_leaves(item);
    return n;
  }
  if (doc.is_map()) {
    std::size_t n = 0;
    for (const auto& [k, v] : doc.as_map()) n += count_leaves(v);
    return n;
  }
  return 1;
}

}  // namespace

TEST_CASE("embed: bag of tokens ignores order and normalizes") {
  Embedder embedder(64, 42);
  CHECK(embedder.embed("book flights") == embedder.embed("flights  BOOK!"));
  Vec v = embedder.embed("Find and book flights");
  double norm = 0.0;
  for (double x : v) norm += x * x;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(embedder.embed(""), Error);
  CHECK_THROWS_AS(embedder.embed("!!! ..."), Error);
}

TEST_CASE("embed: seed-stable and seed-sensitive") {
  Embedder a(32, 7), b(32, 7), c(32, 8);
  CHECK(a.embed("semantic capability matching") == b.embed("semantic capability matching"));
  CHECK(a.embed("semantic capability matching") != c.embed("semantic capability matching"));
}

TEST_CASE("embed: related texts score above unrelated ones") {
  DocValue syn = parse_doc(R"({
    "find": ["search", "locate"],
    "book": ["reserve"],
    "flights": ["air", "travel", "flight"]
  })");
  Embedder embedder(64, 42, SynonymTable::from_doc(syn));
  Vec need = embedder.embed("find and book flights");
  double related = cosine(need, embedder.embed("search and reserve air travel"));
  double unrelated = cosine(need, embedder.embed("forecast weather tomorrow"));
  CHECK(related > unrelated);
}

TEST_CASE("fit_alignment: recovers an exact orthogonal relationship") {
  std::mt19937_64 rng(123);
  std::size_t d = 16;
  auto q = random_orthogonal(d, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::pair<Vec, Vec>> anchors;
  for (int i = 0; i < 64; ++i) {
    Vec s(d);
    for (auto& x : s) x = gauss(rng);
    anchors.emplace_back(s, matvec(q, s));
  }
  AlignmentMap map = fit_alignment(anchors, "gtr-t5");
  CHECK(map.fit_residual < 1e-9);
  CHECK(map.source_model_id == "gtr-t5");

  // held-out pairs keep cosine ~1 after normalization
  for (int i = 0; i < 16; ++i) {
    Vec s(d);
    for (auto& x : s) x = gauss(rng);
    Vec t = matvec(q, s);
    CHECK(cosine(align(s, map), t) >= 0.999);
  }
}

TEST_CASE("fit_alignment: identity anchors give the identity map") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::pair<Vec, Vec>> anchors;
  for (int i = 0; i < 24; ++i) {
    Vec s(8);
    for (auto& x : s) x = gauss(rng);
    anchors.emplace_back(s, s);
  }
  AlignmentMap map = fit_alignment(anchors);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) {
      CHECK(map.matrix[r * 8 + c] == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("fit_alignment: noisy anchors stay within tolerance") {
  std::mt19937_64 rng(2024);
  std::size_t d = 8;
  auto q = random_orthogonal(d, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<std::pair<Vec, Vec>> anchors;
  for (int i = 0; i < 64; ++i) {
    Vec s(d);
    for (auto& x : s) x = gauss(rng);
    Vec t = matvec(q, s);
    for (auto& x : t) x += noise(rng);
    anchors.emplace_back(s, t);
  }
  AlignmentMap map = fit_alignment(anchors);
  CHECK(map.fit_residual <= 0.02);
  for (int i = 0; i < 20; ++i) {
    Vec s(d);
    for (auto& x : s) x = gauss(rng);
    CHECK(cosine(align(s, map), matvec(q, s)) >= 0.99);
  }
}

TEST_CASE("fit_alignment: rank deficiency is reported") {
  std::vector<std::pair<Vec, Vec>> anchors;
  for (int i = 0; i < 10; ++i) {
    Vec s = {double(i), 2.0 * i, 3.0 * i};  // all on one line
    anchors.emplace_back(s, s);
  }
  CHECK_THROWS_AS(fit_alignment(anchors), Error);
  CHECK_THROWS_AS(fit_alignment({}), Error);
}

TEST_CASE("align: in-sample anchors map onto their targets") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto q = random_orthogonal(6, rng);
  std::vector<std::pair<Vec, Vec>> anchors;
  for (int i = 0; i < 18; ++i) {
    Vec s(6);
    for (auto& x : s) x = gauss(rng);
    anchors.emplace_back(s, matvec(q, s));
  }
  AlignmentMap map = fit_alignment(anchors);
  // nearest target anchor of every aligned source is its own pair
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    Vec aligned = align(anchors[i].first, map);
    std::size_t best = 0;
    double best_cos = -2.0;
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      double c = cosine(aligned, anchors[j].second);
      if (c > best_cos) {
        best_cos = c;
        best = j;
      }
    }
    CHECK(best == i);
  }
  CHECK_THROWS_AS(align(Vec(6, 0.0), map), Error);
  CHECK_THROWS_AS(align(Vec(4, 1.0), map), Error);
}

TEST_CASE("translate: the airline document becomes the travel document bit-exactly") {
  ConceptMapTable table = ConceptMapTable::load(fixture("tables/airline_to_travel.json"));
  DocValue airline = parse_doc(kAirlineFlightDoc);
  DocValue expected = parse_doc(kTravelSegmentDoc);
  DocValue translated = translate(airline, table);
  CHECK(canonicalize(translated) == canonicalize(expected));
}

TEST_CASE("translate: empty table is the identity") {
  DocValue doc = parse_doc(kAirlineFlightDoc);
  CHECK(translate(doc, ConceptMapTable{}) == doc);
}

TEST_CASE("translate: unknown lookup value names path and value") {
  ConceptMapTable table = ConceptMapTable::load(fixture("tables/airline_to_travel.json"));
  DocValue airline = parse_doc(kAirlineFlightDoc);
  airline.as_map()["flightOptions"].as_array()[0].as_map()["departure"].as_map()["airport"] =
      DocValue("XXX");
  try {
    translate(airline, table);
    FAIL("expected MissingLookupKey");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingLookupKey);
    CHECK(std::string(e.what()).find("XXX") != std::string::npos);
    CHECK(std::string(e.what()).find("origin.location") != std::string::npos);
  }
}

TEST_CASE("translate: idempotent when targets are disjoint from sources") {
  ConceptMapTable table = ConceptMapTable::load(fixture("tables/airline_to_travel.json"));
  DocValue once = translate(parse_doc(kAirlineFlightDoc), table);
  DocValue twice = translate(once, table);
  CHECK(canonicalize(once) == canonicalize(twice));
}

TEST_CASE("translate: unit, currency and date conversions") {
  ConceptMapTable table = ConceptMapTable::load(fixture("tables/units.json"));
  DocValue doc = parse_doc(R"({
    "distanceKm": 160.9344,
    "priceEur": 100,
    "travelDate": "10/06/2025",
    "roomType": "Superior",
    "note": "untouched"
  })");
  DocValue out = translate(doc, table);
  CHECK(out.find("distanceMiles")->as_number() == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(out.find("priceUsd")->as_number() == doctest::Approx(108.0).epsilon(1e-9));
  CHECK(out.find("departureDate")->as_string() == "06/10/2025");
  CHECK(out.find("roomCategory")->as_string() == "Business");
  CHECK(out.find("note")->as_string() == "untouched");
  CHECK(out.find("distanceKm") == nullptr);
}

TEST_CASE("translate: duplicate target paths are rejected at load") {
  DocValue doc = parse_doc(R"({
    "entries": [
      {"sourcePath": "a", "targetPath": "x", "transform": "rename"},
      {"sourcePath": "b", "targetPath": "x", "transform": "rename"}
    ]
  })");
  CHECK_THROWS_AS(ConceptMapTable::from_doc(doc), Error);
}

TEST_CASE("translate: field conservation on random documents") {
  DocGen gen(4242);
  for (int round = 0; round < 50; ++round) {
    // flat map of scalar leaves, some renamed to fresh keys, none dropped
    DocMap src;
    int n = gen.pick(1, 8);
    for (int i = 0; i < n; ++i) {
      src["field" + std::to_string(i)] = DocValue(gen.number());
    }
    ConceptMapTable table;
    int renames = gen.pick(0, n);
    for (int i = 0; i < renames; ++i) {
      ConceptMapEntry entry;
      entry.source_path = parse_path("field" + std::to_string(i));
      entry.target_path = parse_path("renamed" + std::to_string(i));
      entry.transform = Transform::Rename;
      table.entries.push_back(entry);
    }
    DocValue out = translate(DocValue(src), table);
    CHECK(count_leaves(out) == count_leaves(DocValue(src)));
    for (int i = 0; i < renames; ++i) {
      CHECK(out.find("renamed" + std::to_string(i)) != nullptr);
      CHECK(out.find("field" + std::to_string(i)) == nullptr);
    }
  }
}

TEST_CASE("rewrite_for_constraint: injection adds the parameter") {
  ConstraintRewrite rw;
  rw.constraint = "directFlights";
  rw.injection = ConstraintRewrite::Injection{parse_path("maxConnections"), DocValue(0)};
  DocValue request = parse_doc(R"({"origin":"SFO","destination":"NRT","passengers":2})");
  DocValue rewritten = rewrite_for_constraint(request, rw);
  CHECK(rewritten.find("maxConnections")->as_number() == 0);
  // same value twice is fine; a different value is a conflict
  CHECK(rewrite_for_constraint(rewritten, rw) == rewritten);
  rewritten.as_map()["maxConnections"] = DocValue(2);
  CHECK_THROWS_AS(rewrite_for_constraint(rewritten, rw), Error);
}

TEST_CASE("filter_results: keeps only matching elements") {
  ConstraintRewrite rw;
  rw.constraint = "directFlights";
  rw.filter = ConstraintRewrite::Filter{parse_path("connections"), DocValue(0)};
  DocArray results;
  std::mt19937_64 rng(8);
  std::size_t direct = 0;
  for (int i = 0; i < 40; ++i) {
    int conn = static_cast<int>(rng() % 3);
    if (conn == 0) ++direct;
    results.push_back(DocValue(DocMap{{"flightNo", DocValue("F" + std::to_string(i))},
                                      {"connections", DocValue(conn)}}));
  }
  DocArray kept = filter_results(results, rw);
  CHECK(kept.size() == direct);  // brute-force count
  for (const auto& item : kept) CHECK(item.find("connections")->as_number() == 0);

  // all-direct input passes through unchanged
  DocArray all_direct;
  for (int i = 0; i < 5; ++i) {
    all_direct.push_back(DocValue(DocMap{{"connections", DocValue(0)}}));
  }
  CHECK(filter_results(all_direct, rw) == all_direct);
}

TEST_CASE("rewrite table: forms parse and exclusive-arm rule holds") {
  DocValue doc = parse_doc(R"({
    "rewrites": [
      {"constraint": "directFlights", "injection": {"path": "maxConnections", "value": 0}},
      {"constraint": "directFlights", "filter": {"field": "connections", "equals": 0}},
      {"constraint": "businessClass", "filter": {"field": "cabin", "equals": "business"}}
    ]
  })");
  ConstraintRewriteTable table = ConstraintRewriteTable::from_doc(doc);
  CHECK(table.injection_for("directFlights") != nullptr);
  CHECK(table.filter_for("directFlights") != nullptr);
  CHECK(table.injection_for("businessClass") == nullptr);
  CHECK(table.filter_for("businessClass") != nullptr);

  DocValue bad = parse_doc(R"({
    "rewrites": [
      {"constraint": "x", "injection": {"path": "a", "value": 1}, "filter": {"field": "b", "equals": 1}}
    ]
  })");
  CHECK_THROWS_AS(ConstraintRewriteTable::from_doc(bad), Error);
}

TEST_CASE("doc paths: parse, resolve, wildcard round trip") {
  DocPath path = parse_path("travelSegments[*].origin.location");
  CHECK(path_to_string(path) == "travelSegments[*].origin.location");
  DocValue doc = parse_doc(kTravelSegmentDoc);
  auto matches = resolve_path(doc, path);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].value->as_string() == "San Francisco");

  const DocValue* first = get_path(doc, parse_path("travelSegments[0].cost"));
  REQUIRE(first != nullptr);
  CHECK(first->as_number() == 1650);
  CHECK(get_path(doc, parse_path("travelSegments[3].cost")) == nullptr);
  CHECK_THROWS_AS(parse_path(""), Error);
  CHECK_THROWS_AS(parse_path("a..b"), Error);
  CHECK_THROWS_AS(parse_path("a[b]"), Error);
}
