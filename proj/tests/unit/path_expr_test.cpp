#include <gtest/gtest.h>

#include <random>

#include "path_oracle.hpp"
#include "test_support.hpp"
#include "toolgym/cache_store.hpp"
#include "toolgym/errors.hpp"
#include "toolgym/path_expr.hpp"

using namespace toolgym;

namespace {

std::size_t syntax_offset(std::string_view src) {
  try {
    parse_path(src);
  } catch (const PathSyntaxError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no error for '" << src << "'";
  return std::string::npos;
}

std::size_t missing_segment(std::string_view src, const Value& root) {
  try {
    extract(parse_path(src), root);
  } catch (const PathNotFound& e) {
    return e.segment();
  }
  ADD_FAILURE() << "no error for '" << src << "'";
  return std::string::npos;
}

}  // namespace

TEST(ParsePath, LeadingIndex) {
  const PathExpr p = parse_path("[0].coordinates.latitude");
  const std::vector<PathSegment> want{PathSegment::Index(0), PathSegment::Field("coordinates"),
                                      PathSegment::Field("latitude")};
  EXPECT_EQ(p.segments(), want);
}

TEST(ParsePath, NestedFields) {
  const std::vector<PathSegment> want{PathSegment::Field("search_context"), PathSegment::Field("searchKey")};
  EXPECT_EQ(parse_path("search_context.searchKey").segments(), want);
}

TEST(ParsePath, IndexAfterField) {
  const std::vector<PathSegment> want{PathSegment::Field("search_results"), PathSegment::Index(0),
                                      PathSegment::Field("vehicle_id")};
  EXPECT_EQ(parse_path("search_results[0].vehicle_id").segments(), want);
  EXPECT_EQ(parse_path("a[12][3]").segments().size(), 3u);
}

TEST(ParsePath, SyntaxErrorOffsets) {
  EXPECT_EQ(syntax_offset(""), 0u);
  EXPECT_EQ(syntax_offset(".a"), 0u);
  EXPECT_EQ(syntax_offset("a."), 2u);
  EXPECT_EQ(syntax_offset("a..b"), 2u);
  EXPECT_EQ(syntax_offset("1abc"), 0u);
  EXPECT_EQ(syntax_offset("a[x]"), 2u);
  EXPECT_EQ(syntax_offset("a[]"), 2u);
  EXPECT_EQ(syntax_offset("a[0"), 3u);
  EXPECT_EQ(syntax_offset("a b"), 1u);
  EXPECT_EQ(syntax_offset("a.[0]"), 2u);
}

TEST(ParsePath, RenderRoundTripsRandomPaths) {
  std::mt19937_64 rng(3);
  const std::string first = "abcxyzABC_";
  const std::string rest = "abc019_Z";
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<PathSegment> segs;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      if (rng() % 3 == 0) {
        segs.push_back(PathSegment::Index(rng() % 200));
      } else {
        std::string name(1, first[rng() % first.size()]);
        for (int k = static_cast<int>(rng() % 6); k > 0; --k) name += rest[rng() % rest.size()];
        segs.push_back(PathSegment::Field(name));
      }
    }
    const PathExpr p(segs);
    const std::string text = render(p);
    ASSERT_EQ(parse_path(text), p) << text;
    ASSERT_EQ(render(parse_path(text)), text);
  }
}

TEST(PathExpr, RejectsEmptyParts) {
  EXPECT_THROW(PathExpr(std::vector<PathSegment>{}), SchemaError);
  EXPECT_THROW(PathExpr({PathSegment::Field("")}), SchemaError);
}

TEST(Extract, VehicleIdFromCarRentalResults) {
  const CacheStore store = CacheStore::load(testing_support::fixture("car_rental_cache.jsonl"));
  const Observation& o2 = store.entries()[1].observation;
  EXPECT_EQ(extract(parse_path("search_results[0].vehicle_id"), o2), Value("637318066"));
  const Observation& o1 = store.entries()[0].observation;
  EXPECT_TRUE(canonical_equal(extract(parse_path("[0].coordinates.latitude"), o1), Value(32.87)));
}

TEST(Extract, SimpleAndMissing) {
  EXPECT_EQ(extract(parse_path("x"), Value{{"x", 7}}), Value(7));
  EXPECT_EQ(missing_segment("[3]", Value::array({1, 2})), 0u);
  EXPECT_EQ(missing_segment("a.b", Value{{"a", {{"c", 1}}}}), 1u);
  EXPECT_EQ(missing_segment("a[0]", Value{{"a", {{"c", 1}}}}), 1u);   // index on map
  EXPECT_EQ(missing_segment("[0].a", Value::array({Value::array({1})})), 1u);  // field on list
  EXPECT_EQ(missing_segment("a.b", Value{{"a", 5}}), 1u);             // field on scalar
}

TEST(Extract, ErrorObservationIsPreconditionViolation) {
  EXPECT_THROW(extract(parse_path("x"), Observation::failure(ErrorCode::kCacheMiss, "m")), std::invalid_argument);
}

TEST(Extract, PureAndAgreesWithOracle) {
  std::mt19937_64 rng(17);
  const Value root = Value::parse(R"({"a":[{"b":{"c":[1,2,{"d":"x"}]}},{"e":null}],"f":{"g":2.5}})");
  const Value copy = root;
  const std::vector<std::string> paths{"a",         "a[0].b.c[2].d", "a[1].e", "f.g", "a[2]", "f.h",
                                       "a[0].b.c[5]", "f[0]",         "a.b",    "a[0].b.c"};
  for (int rep = 0; rep < 3; ++rep) {
    for (const auto& p : paths) {
      const auto want = oracle::follow(root, p);
      if (want) {
        EXPECT_EQ(extract(parse_path(p), root), *want) << p;
      } else {
        EXPECT_THROW(extract(parse_path(p), root), PathNotFound) << p;
      }
    }
  }
  EXPECT_EQ(root, copy);
}
