#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "maxvolkit/recsys.hpp"

using namespace maxvolkit;

namespace {

RatingsDataset from_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_ratings(in, RatingsFormat::csv);
}

}  // namespace

TEST_CASE("csv triples load with dense re-indexed IDs") {
    const RatingsDataset ds = from_csv("1,1,5\n2,1,3\n");
    REQUIRE(ds.n_users() == 2);
    REQUIRE(ds.n_items() == 1);
    REQUIRE(ds.triples.size() == 2);
    REQUIRE(ds.duplicate_count == 0);
    const DenseMatrix a = ds.densify();
    REQUIRE(a(0, 0) == 5.0);
    REQUIRE(a(1, 0) == 3.0);
}

TEST_CASE("movielens-style separator parses with optional timestamp") {
    std::istringstream in("1::2::4.0::964982703\n");
    const RatingsDataset ds = parse_ratings(in, RatingsFormat::movielens_dat);
    REQUIRE(ds.triples.size() == 1);
    REQUIRE(ds.triples[0].user == 1);
    REQUIRE(ds.triples[0].item == 2);
    REQUIRE(ds.triples[0].rating == 4.0);
}

TEST_CASE("duplicate pairs collapse with the last rating winning") {
    const RatingsDataset ds = from_csv("1,1,5\n1,1,2\n");
    REQUIRE(ds.triples.size() == 1);
    REQUIRE(ds.duplicate_count == 1);
    REQUIRE(ds.triples[0].rating == 2.0);
}

TEST_CASE("parse failures carry line numbers; empty input is rejected") {
    try {
        from_csv("1,1,5\nbogus,2,3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.line() == 2);
    }
    REQUIRE_THROWS_AS(from_csv(""), EmptyDatasetError);
    REQUIRE_THROWS_AS(from_csv("user,item,rating\n"), EmptyDatasetError);

    // a header line is tolerated
    const RatingsDataset ds = from_csv("userId,movieId,rating,timestamp\n1,1,5\n");
    REQUIRE(ds.triples.size() == 1);

    REQUIRE_THROWS_AS(load_ratings("/nonexistent/ratings.csv", RatingsFormat::csv), IoError);
}

TEST_CASE("representatives on a diagonal ratings matrix select everyone") {
    std::ostringstream text;
    for (int i = 0; i < 4; ++i)
        text << (10 * (i + 1)) << "," << (7 + i) << "," << (i + 1) << "\n";
    const RatingsDataset ds = from_csv(text.str());
    const auto reps = representatives(ds, 4, Side::users, SelectMethod::square);
    std::vector<std::int64_t> got = reps;
    std::sort(got.begin(), got.end());
    REQUIRE(got == std::vector<std::int64_t>{10, 20, 30, 40});
}

TEST_CASE("rank-1 ratings pick the strongest item") {
    // user factors (1,2), item factors (3,1): ratings u_i * v_j
    const RatingsDataset ds = from_csv("1,7,3\n1,8,1\n2,7,6\n2,8,2\n");
    const auto reps = representatives(ds, 1, Side::items, SelectMethod::square);
    REQUIRE(reps == std::vector<std::int64_t>{7});
}

TEST_CASE("rect representatives return between k and 2k+1 indices") {
    Pcg32 rng(701);
    std::ostringstream text;
    const DenseMatrix base = test_helpers::random_rank_r(rng, 50, 40, 5);
    for (Index u = 0; u < 50; ++u)
        for (Index i = 0; i < 40; ++i) {
            const double noisy = base(u, i) + 0.05 * rng.normal();
            text << (u + 1) << "," << (i + 1) << "," << noisy << "\n";
        }
    const RatingsDataset ds = from_csv(text.str());
    const auto reps = representatives(ds, 10, Side::users, SelectMethod::rect, 1.0);
    REQUIRE(reps.size() >= 10);
    REQUIRE(reps.size() <= 21);
    std::vector<std::int64_t> dedup = reps;
    std::sort(dedup.begin(), dedup.end());
    REQUIRE(std::adjacent_find(dedup.begin(), dedup.end()) == dedup.end());
}

TEST_CASE("representatives validates k and degenerate input") {
    const RatingsDataset ds = from_csv("1,1,5\n2,2,3\n");
    REQUIRE_THROWS_AS(representatives(ds, 5, Side::users, SelectMethod::square), DimensionError);
    const RatingsDataset zeros = from_csv("1,1,0\n2,2,0\n");
    REQUIRE_THROWS_AS(representatives(zeros, 1, Side::users, SelectMethod::square),
                      RankDeficientError);
}

TEST_CASE("coverage counts counterpart entities touching any representative") {
    // users 1..4 and items 1..3; reps = items {1}
    const RatingsDataset ds = from_csv("1,1,5\n2,1,4\n3,2,3\n4,3,2\n");
    REQUIRE(coverage(ds, {1}, Side::items) == 0.5);

    // every user rated representative item 1
    const RatingsDataset all = from_csv("1,1,5\n2,1,4\n");
    REQUIRE(coverage(all, {1}, Side::items) == 1.0);

    // representatives nobody interacted with
    REQUIRE(coverage(ds, {999}, Side::items) == 0.0);
}

TEST_CASE("diversity uses a strict 10 percent threshold") {
    // 20 representative items; user 1 rates exactly 1 of them, user 2 rates 2,
    // user 3 rates none
    std::ostringstream text;
    text << "1,1,5\n";
    text << "2,1,5\n2,2,5\n";
    text << "3,100,5\n";
    for (int item = 1; item <= 20; ++item) text << "9," << item << ",3\n";  // anchor all items
    const RatingsDataset ds = from_csv(text.str());
    std::vector<std::int64_t> reps;
    for (int item = 1; item <= 20; ++item) reps.push_back(item);

    // threshold = 2.0: user 1 counts (1 < 2), user 2 does not (2 is not < 2),
    // user 3 touches nothing, user 9 rates all 20
    REQUIRE(diversity(ds, reps, Side::items) == 0.25);

    // no interactions with the representatives at all
    REQUIRE(diversity(ds, {999}, Side::items) == 0.0);
}

TEST_CASE("coverage and diversity also work on the user side") {
    // reps = users {1}; items 1 and 2 are rated by user 1, item 3 is not
    const RatingsDataset ds = from_csv("1,1,5\n1,2,4\n2,3,3\n");
    REQUIRE(coverage(ds, {1}, Side::users) == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("precision_at_n on a planted fixture") {
    // train: user 1 rated item 1 only; projection onto the item-1 column
    // ranks item 2 above item 3 for user 1
    const RatingsDataset train = from_csv("1,1,5\n2,1,5\n2,2,5\n2,3,1\n");
    const RatingsDataset test_hit = from_csv("1,2,5\n");
    const PrecisionResult hit = precision_at_n(train, test_hit, {1}, 1, 4.0);
    REQUIRE(hit.evaluated_users == 1);
    REQUIRE(hit.value == 1.0);

    // same ranking, but the held-out rating is below the threshold
    const RatingsDataset test_low = from_csv("1,2,2\n");
    const PrecisionResult low = precision_at_n(train, test_low, {1}, 1, 4.0);
    REQUIRE(low.value == 0.0);
    REQUIRE_FALSE(low.no_eligible_users);

    // top-2: item 2 is good, item 3 has no held-out rating
    const PrecisionResult half = precision_at_n(train, test_hit, {1}, 2, 4.0);
    REQUIRE(half.value == 0.5);
}

TEST_CASE("precision with no eligible test users is flagged") {
    const RatingsDataset train = from_csv("1,1,5\n2,1,5\n2,2,4\n");
    const RatingsDataset test = from_csv("77,1,5\n");  // unknown user
    const PrecisionResult res = precision_at_n(train, test, {1}, 1, 4.0);
    REQUIRE(res.no_eligible_users);
    REQUIRE(res.value == 0.0);
    REQUIRE(res.evaluated_users == 0);
}

TEST_CASE("metrics are deterministic and within [0, 1]") {
    Pcg32 rng(702);
    std::ostringstream text;
    for (int t = 0; t < 200; ++t) {
        const int u = 1 + static_cast<int>(rng.next_u32() % 25);
        const int i = 1 + static_cast<int>(rng.next_u32() % 15);
        text << u << "," << i << "," << 1 + static_cast<int>(rng.next_u32() % 5) << "\n";
    }
    const RatingsDataset ds = from_csv(text.str());
    const auto reps = representatives(ds, 5, Side::items, SelectMethod::square);
    const auto reps2 = representatives(ds, 5, Side::items, SelectMethod::square);
    REQUIRE(reps == reps2);

    const double cov = coverage(ds, reps, Side::items);
    const double div = diversity(ds, reps, Side::items);
    REQUIRE(cov >= 0.0);
    REQUIRE(cov <= 1.0);
    REQUIRE(div >= 0.0);
    REQUIRE(div <= 1.0);
    REQUIRE(coverage(ds, reps, Side::items) == cov);
}
