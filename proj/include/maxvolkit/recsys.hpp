#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "maxvolkit/errors.hpp"
#include "maxvolkit/kernels.hpp"
#include "maxvolkit/matrix.hpp"
#include "maxvolkit/skeleton.hpp"

namespace maxvolkit {

enum class RatingsFormat { csv, movielens_dat };
enum class Side { users, items };

inline const char* to_string(Side s) { return s == Side::users ? "users" : "items"; }

/// Sparse (user, item, rating) triples with dense re-indexed IDs. Duplicate
/// (user, item) pairs are collapsed on load, last occurrence winning.
struct RatingsDataset {
    struct Triple {
        std::int64_t user;
        std::int64_t item;
        double rating;
    };

    std::vector<Triple> triples;  // deduplicated, first-occurrence order
    std::vector<std::int64_t> user_ids;  // dense index -> original ID
    std::vector<std::int64_t> item_ids;
    std::unordered_map<std::int64_t, Index> user_index;  // original ID -> dense index
    std::unordered_map<std::int64_t, Index> item_index;
    std::size_t duplicate_count = 0;

    Index n_users() const { return static_cast<Index>(user_ids.size()); }
    Index n_items() const { return static_cast<Index>(item_ids.size()); }

    /// Dense users x items matrix; missing ratings are zeros.
    DenseMatrix densify() const {
        DenseMatrix a = DenseMatrix::Zero(n_users(), n_items());
        for (const Triple& t : triples) a(user_index.at(t.user), item_index.at(t.item)) = t.rating;
        return a;
    }

    void add(std::int64_t user, std::int64_t item, double rating) {
        if (user_index.find(user) == user_index.end()) {
            user_index.emplace(user, n_users());
            user_ids.push_back(user);
        }
        if (item_index.find(item) == item_index.end()) {
            item_index.emplace(item, n_items());
            item_ids.push_back(item);
        }
        const auto key = std::make_pair(user, item);
        auto it = pair_position_.find(key);
        if (it != pair_position_.end()) {
            triples[it->second].rating = rating;
            ++duplicate_count;
        } else {
            pair_position_.emplace(key, triples.size());
            triples.push_back({user, item, rating});
        }
    }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
            const std::uint64_t a = static_cast<std::uint64_t>(p.first);
            const std::uint64_t b = static_cast<std::uint64_t>(p.second);
            std::uint64_t h = a * 0x9e3779b97f4a7c15ULL;
            h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return static_cast<std::size_t>(h);
        }
    };
    std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::size_t, PairHash>
        pair_position_;
};

namespace detail {

inline bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

inline std::vector<std::string> split_fields(const std::string& line, RatingsFormat format) {
    std::vector<std::string> fields;
    if (format == RatingsFormat::csv) {
        std::string cur;
        std::istringstream in(line);
        while (std::getline(in, cur, ',')) fields.push_back(cur);
    } else {
        std::size_t pos = 0;
        while (true) {
            const std::size_t next = line.find("::", pos);
            if (next == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, next - pos));
            pos = next + 2;
        }
    }
    for (std::string& f : fields) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ' || f.back() == '\t')) f.pop_back();
        std::size_t start = 0;
        while (start < f.size() && (f[start] == ' ' || f[start] == '\t')) ++start;
        f.erase(0, start);
    }
    return fields;
}

}  // namespace detail

/// Parse ratings triples from a stream. CSV rows are user,item,rating with an
/// optional trailing timestamp; the "::"-delimited format uses the same field
/// order. A non-numeric first line (a column header) is skipped.
inline RatingsDataset parse_ratings(std::istream& in, RatingsFormat format) {
    RatingsDataset ds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = line;
        while (!stripped.empty() && (stripped.back() == '\r' || stripped.back() == '\n'))
            stripped.pop_back();
        if (stripped.empty()) continue;

        const auto fields = detail::split_fields(stripped, format);
        if (fields.size() != 3 && fields.size() != 4) {
            if (line_no == 1) continue;  // header line
            throw ParseError("ratings: expected 3 or 4 fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        std::int64_t user = 0, item = 0;
        double rating = 0.0;
        if (!detail::parse_int64(fields[0], user) || !detail::parse_int64(fields[1], item) ||
            !detail::parse_double(fields[2], rating)) {
            if (line_no == 1) continue;  // header line
            throw ParseError("ratings: malformed numeric field", line_no);
        }
        if (!std::isfinite(rating)) throw ParseError("ratings: non-finite rating", line_no);
        ds.add(user, item, rating);
    }
    if (ds.triples.empty()) throw EmptyDatasetError("ratings: no usable triples found");
    return ds;
}

inline RatingsDataset load_ratings(const std::string& path, RatingsFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ratings file: " + path);
    return parse_ratings(in, format);
}

/// Representative users or items: rank-k truncated SVD of the dense ratings
/// matrix, then (rect_)maxvol on the singular-vector block of the requested
/// side. Returns original IDs.
inline std::vector<std::int64_t> representatives(const RatingsDataset& ds, Index k, Side side,
                                                 SelectMethod method, double tau = 1.0) {
    if (k < 1 || k > std::min(ds.n_users(), ds.n_items()))
        throw DimensionError("representatives: need 1 <= k <= min(n_users, n_items)");
    const DenseMatrix a = ds.densify();
    const LowRankFactors f = svd(a, k);
    if (f.sigma(0) == 0.0)
        throw RankDeficientError("representatives: ratings matrix has no signal");
    const DenseMatrix& basis = side == Side::users ? f.U : f.V;
    const IndexList picked = select_basis_rows(basis, method, tau);
    const auto& ids = side == Side::users ? ds.user_ids : ds.item_ids;
    std::vector<std::int64_t> out;
    out.reserve(picked.size());
    for (Index p : picked) out.push_back(ids[static_cast<std::size_t>(p)]);
    return out;
}

namespace detail {

/// Number of distinct representatives each counterpart entity interacts with.
inline std::vector<int> rep_interaction_counts(const RatingsDataset& ds,
                                               const std::vector<std::int64_t>& reps,
                                               Side reps_side) {
    std::unordered_set<std::int64_t> rep_set(reps.begin(), reps.end());
    const Index n_other = reps_side == Side::items ? ds.n_users() : ds.n_items();
    std::vector<int> counts(static_cast<std::size_t>(n_other), 0);
    for (const RatingsDataset::Triple& t : ds.triples) {
        const std::int64_t rep_id = reps_side == Side::items ? t.item : t.user;
        if (rep_set.find(rep_id) == rep_set.end()) continue;
        const Index other = reps_side == Side::items ? ds.user_index.at(t.user)
                                                     : ds.item_index.at(t.item);
        ++counts[static_cast<std::size_t>(other)];
    }
    return counts;
}

}  // namespace detail

/// Fraction of counterpart entities touching at least one representative.
inline double coverage(const RatingsDataset& ds, const std::vector<std::int64_t>& reps,
                       Side reps_side) {
    const auto counts = detail::rep_interaction_counts(ds, reps, reps_side);
    if (counts.empty()) return 0.0;
    std::size_t covered = 0;
    for (int c : counts)
        if (c >= 1) ++covered;
    return static_cast<double>(covered) / static_cast<double>(counts.size());
}

/// Fraction of counterpart entities touching at least one representative but
/// strictly fewer than 10% of them (real-valued threshold, strict inequality).
inline double diversity(const RatingsDataset& ds, const std::vector<std::int64_t>& reps,
                        Side reps_side) {
    const auto counts = detail::rep_interaction_counts(ds, reps, reps_side);
    if (counts.empty()) return 0.0;
    const double threshold = 0.10 * static_cast<double>(reps.size());
    std::size_t diverse = 0;
    for (int c : counts)
        if (c >= 1 && static_cast<double>(c) < threshold) ++diverse;
    return static_cast<double>(diverse) / static_cast<double>(counts.size());
}

struct PrecisionResult {
    double value = 0.0;
    /// True when no test user had any rating, in which case value is 0.
    bool no_eligible_users = false;
    std::size_t evaluated_users = 0;
};

/// Precision-at-n over representative items: predicted scores are the
/// projection of the training matrix onto the span of the representative item
/// columns; the top n previously-unrated items per user count as good when
/// the held-out rating reaches good_threshold.
inline PrecisionResult precision_at_n(const RatingsDataset& train, const RatingsDataset& test,
                                      const std::vector<std::int64_t>& rep_items, Index n,
                                      double good_threshold = 4.0) {
    if (n < 1) throw InvalidBoundsError("precision_at_n: n must be positive");
    const DenseMatrix a = train.densify();

    IndexList rep_cols;
    for (std::int64_t id : rep_items) {
        auto it = train.item_index.find(id);
        if (it != train.item_index.end()) rep_cols.push_back(it->second);
    }
    DenseMatrix predicted;
    if (rep_cols.empty()) {
        predicted = DenseMatrix::Zero(a.rows(), a.cols());
    } else {
        const DenseMatrix basis = select_cols(a, rep_cols);
        predicted = basis * least_squares_min_norm(basis, a);
    }

    // rated-in-train mask
    std::vector<std::vector<bool>> rated(static_cast<std::size_t>(train.n_users()),
                                         std::vector<bool>(static_cast<std::size_t>(train.n_items()), false));
    for (const auto& t : train.triples)
        rated[static_cast<std::size_t>(train.user_index.at(t.user))]
             [static_cast<std::size_t>(train.item_index.at(t.item))] = true;

    // held-out ratings, keyed by train-side dense indices
    std::unordered_map<std::int64_t, std::unordered_map<Index, double>> held_out;
    for (const auto& t : test.triples) {
        auto it = train.item_index.find(t.item);
        if (it == train.item_index.end()) continue;
        held_out[t.user][it->second] = t.rating;
    }
    std::unordered_set<std::int64_t> test_users;
    for (const auto& t : test.triples) test_users.insert(t.user);

    double total = 0.0;
    std::size_t evaluated = 0;
    for (Index u = 0; u < train.n_users(); ++u) {
        const std::int64_t uid = train.user_ids[static_cast<std::size_t>(u)];
        if (test_users.find(uid) == test_users.end()) continue;

        std::vector<Index> candidates;
        for (Index j = 0; j < train.n_items(); ++j)
            if (!rated[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)])
                candidates.push_back(j);
        if (candidates.empty()) continue;

        const Index take = std::min<Index>(n, static_cast<Index>(candidates.size()));
        std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                          [&predicted, u](Index x, Index y) {
                              if (predicted(u, x) != predicted(u, y))
                                  return predicted(u, x) > predicted(u, y);
                              return x < y;
                          });

        const auto user_held = held_out.find(uid);
        Index good = 0;
        for (Index t = 0; t < take; ++t) {
            if (user_held == held_out.end()) break;
            auto it = user_held->second.find(candidates[static_cast<std::size_t>(t)]);
            if (it != user_held->second.end() && it->second >= good_threshold) ++good;
        }
        total += static_cast<double>(good) / static_cast<double>(take);
        ++evaluated;
    }

    PrecisionResult res;
    res.evaluated_users = evaluated;
    if (evaluated == 0) {
        res.no_eligible_users = true;
        res.value = 0.0;
    } else {
        res.value = total / static_cast<double>(evaluated);
    }
    return res;
}

}  // namespace maxvolkit
