// Command-line front door: one subcommand per pipeline, Matrix Market and
// ratings-file input, deterministic JSON reports on standard output. Human
// summaries and timings go to standard error so reports stay byte-stable for
// a fixed seed and flag set.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxvolkit/maxvolkit.hpp"

namespace {

using json = nlohmann::json;
using namespace maxvolkit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

json make_report(const std::string& command, const json& flags) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["flags"] = flags;
    return j;
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2);
    std::cout << text << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot open report file for writing: " + out_path);
        out << text << "\n";
    }
}

json index_array(const IndexList& v) {
    json arr = json::array();
    for (Index i : v) arr.push_back(static_cast<std::int64_t>(i));
    return arr;
}

json id_array(const std::vector<std::int64_t>& v) {
    json arr = json::array();
    for (std::int64_t i : v) arr.push_back(i);
    return arr;
}

SelectMethod parse_method(const std::string& s) {
    return s == "square" ? SelectMethod::square : SelectMethod::rect;
}

Vector load_rhs(const std::string& path) {
    DenseMatrix b = read_matrix_market(path);
    if (b.cols() == 1) return b.col(0);
    if (b.rows() == 1) return b.row(0).transpose();
    throw DimensionError("right-hand side must be a single row or column");
}

unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("MAXVOLKIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    return std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(jobs, 1)));
}

struct RatioStats {
    double min = 0.0;
    double mean = 0.0;
    double median = 0.0;
    std::vector<long> histogram;
};

RatioStats ratio_stats(const std::vector<double>& ratios, int bins) {
    RatioStats s;
    s.histogram.assign(static_cast<std::size_t>(bins), 0);
    if (ratios.empty()) return s;
    s.min = *std::min_element(ratios.begin(), ratios.end());
    s.mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) /
             static_cast<double>(ratios.size());
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
    for (double r : ratios) {
        int bin = static_cast<int>(r * bins);
        bin = std::clamp(bin, 0, bins - 1);
        ++s.histogram[static_cast<std::size_t>(bin)];
    }
    return s;
}

json stats_json(const RatioStats& s, int bins) {
    json j;
    j["min"] = s.min;
    j["mean"] = s.mean;
    j["median"] = s.median;
    json edges = json::array();
    for (int i = 0; i <= bins; ++i) edges.push_back(static_cast<double>(i) / bins);
    j["histogram"] = {{"bin_edges", edges}, {"counts", s.histogram}};
    return j;
}

// ---------------------------------------------------------------------------

int run_maxvol(const std::string& input, double eps, const std::string& out_path) {
    const DenseMatrix a = read_matrix_market(input);
    require_finite(a, "maxvol input");
    const SelectionResult res = maxvol(a, eps);

    json flags{{"input", input}, {"eps", eps}, {"out", out_path}};
    json report = make_report("maxvol", flags);
    report["row_indices"] = index_array(res.row_indices);
    report["max_abs_c"] = res.C.cwiseAbs().maxCoeff();
    report["iterations"] = res.iterations;
    report["hit_iteration_limit"] = res.hit_iteration_limit;
    report["log_vol2"] = res.log_vol2_trace.back();
    emit(report, out_path);

    std::cerr << "maxvol: " << res.row_indices.size() << " rows after " << res.iterations
              << " swaps, max|C| = " << res.C.cwiseAbs().maxCoeff() << "\n";
    if (res.hit_iteration_limit) {
        std::cerr << "maxvol: iteration limit reached before convergence\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int run_rect_maxvol(const std::string& input, double tau, Index min_k, Index max_k,
                    bool identity_hat, const std::string& out_path) {
    const DenseMatrix a = read_matrix_market(input);
    require_finite(a, "rectmaxvol input");
    RectMaxvolOptions opt;
    opt.tau = tau;
    opt.min_rows = min_k;
    opt.max_rows = max_k;
    opt.identity_hat = identity_hat;
    const SelectionResult res = rect_maxvol(a, opt);

    double max_row_norm = 0.0;
    for (Index i = 0; i < res.C.rows(); ++i)
        max_row_norm = std::max(max_row_norm, res.C.row(i).norm());

    json flags{{"input", input},   {"tau", tau},
               {"min_k", static_cast<std::int64_t>(min_k)},
               {"max_k", static_cast<std::int64_t>(max_k)},
               {"identity_hat", identity_hat}, {"out", out_path}};
    json report = make_report("rectmaxvol", flags);
    report["row_indices"] = index_array(res.row_indices);
    report["k"] = static_cast<std::int64_t>(res.row_indices.size());
    report["max_row_norm"] = max_row_norm;
    report["log_vol2"] = res.log_vol2_trace.back();
    report["iterations"] = res.iterations;
    report["hat_c_mode"] = to_string(res.hat_c_mode);
    emit(report, out_path);

    std::cerr << "rectmaxvol: K = " << res.row_indices.size()
              << ", max row norm = " << max_row_norm << "\n";
    return kExitOk;
}

int run_cur(const std::string& input, Index rank, const std::string& method, double tau,
            const std::string& out_path) {
    const DenseMatrix a = read_matrix_market(input);
    require_finite(a, "cur input");
    const auto [rows, cols] = select_skeleton(a, rank, parse_method(method), tau);
    const SkeletonApprox sk = build_pseudo_skeleton(a, rows, cols);
    const DenseMatrix residual = a - sk.reconstruct();
    const double a_frob = a.norm();
    const double frob = residual.norm();
    const double spec = spectral_norm(residual);

    json flags{{"input", input}, {"rank", static_cast<std::int64_t>(rank)},
               {"method", method}, {"tau", tau}, {"out", out_path}};
    json report = make_report("cur", flags);
    report["row_indices"] = index_array(sk.row_indices);
    report["col_indices"] = index_array(sk.col_indices);
    report["frobenius_error"] = frob;
    report["spectral_error"] = spec;
    report["frobenius_error_rel"] = a_frob > 0.0 ? frob / a_frob : 0.0;
    report["spectral_error_rel"] = a_frob > 0.0 ? spec / spectral_norm(a) : 0.0;
    emit(report, out_path);

    std::cerr << "cur: " << sk.row_indices.size() << " rows x " << sk.col_indices.size()
              << " cols, relative Frobenius error = " << report["frobenius_error_rel"] << "\n";
    return kExitOk;
}

int run_maxelem(Index rank, Index n, Index m, long trials, std::uint64_t seed,
                const std::string& method, double tau, const std::string& out_path) {
    const bool want_square = method == "square" || method == "both";
    const bool want_rect = method == "rect" || method == "both";
    std::vector<double> square_ratios(want_square ? static_cast<std::size_t>(trials) : 0);
    std::vector<double> rect_ratios(want_rect ? static_cast<std::size_t>(trials) : 0);

    // Trials fan out over workers; trial t always uses seed + t, so the
    // report does not depend on the worker count.
    std::atomic<long> next{0};
    auto worker = [&]() {
        while (true) {
            const long t = next.fetch_add(1);
            if (t >= trials) break;
            Pcg32 rng(seed + static_cast<std::uint64_t>(t));
            const LowRankFactors f = random_low_rank_factors(rng, n, m, rank);
            const DenseMatrix full = f.reconstruct();
            const double true_max = full.cwiseAbs().maxCoeff();
            if (want_square) {
                const MaxElement e = find_max_element(f, SelectMethod::square, tau);
                square_ratios[static_cast<std::size_t>(t)] =
                    std::abs(full(e.row, e.col)) / true_max;
            }
            if (want_rect) {
                const MaxElement e = find_max_element(f, SelectMethod::rect, tau);
                rect_ratios[static_cast<std::size_t>(t)] =
                    std::abs(full(e.row, e.col)) / true_max;
            }
        }
    };
    const unsigned workers = worker_count(static_cast<std::size_t>(trials));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const int bins = 20;
    json flags{{"rank", static_cast<std::int64_t>(rank)}, {"n", static_cast<std::int64_t>(n)},
               {"m", static_cast<std::int64_t>(m)},       {"trials", trials},
               {"seed", seed},                            {"method", method},
               {"tau", tau},                              {"out", out_path}};
    json report = make_report("maxelem", flags);
    report["methods"] = json::object();
    if (want_square) report["methods"]["square"] = stats_json(ratio_stats(square_ratios, bins), bins);
    if (want_rect) report["methods"]["rect"] = stats_json(ratio_stats(rect_ratios, bins), bins);
    emit(report, out_path);

    std::cerr << "maxelem: " << trials << " trials";
    if (want_square) std::cerr << ", square mean ratio = " << ratio_stats(square_ratios, bins).mean;
    if (want_rect) std::cerr << ", rect mean ratio = " << ratio_stats(rect_ratios, bins).mean;
    std::cerr << "\n";
    return kExitOk;
}

int run_precond(const std::string& input, const std::string& method, double tau,
                const std::string& rhs_path, const std::string& out_path) {
    const DenseMatrix a = read_matrix_market(input);
    require_finite(a, "precond input");
    const bool want_square = method == "square" || method == "both";
    const bool want_rect = method == "rect" || method == "both";

    json flags{{"input", input}, {"method", method}, {"tau", tau},
               {"rhs", rhs_path}, {"out", out_path}};
    json report = make_report("precond", flags);
    report["methods"] = json::object();

    Vector b;
    if (!rhs_path.empty()) {
        b = load_rhs(rhs_path);
        if (b.size() != a.rows())
            throw DimensionError("right-hand side length does not match matrix rows");
    }

    auto run_one = [&](SelectMethod m, const char* name) {
        const auto start = std::chrono::steady_clock::now();
        const AugmentedSystem sys = build_augmented(a, m, tau);
        DenseMatrix c_full(sys.total_rows(), sys.basis_size());
        c_full.topRows(sys.basis_size()).setIdentity();
        c_full.bottomRows(sys.tilde_c.rows()) = sys.tilde_c;
        json entry;
        entry["k"] = static_cast<std::int64_t>(sys.basis_size());
        entry["c_norm_2"] = spectral_norm(c_full);
        entry["cond_z"] = cond_formula(sys);
        if (b.size() > 0) {
            const AugmentedSolve sol = solve_via_augmented(a, b, m, tau);
            json x = json::array();
            for (Index i = 0; i < sol.x.size(); ++i) x.push_back(sol.x(i));
            entry["solve"] = {{"x", x}, {"residual_norm", sol.residual_norm}};
        }
        report["methods"][name] = entry;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cerr << "precond " << name << ": K = " << sys.basis_size()
                  << ", |C|_2 = " << entry["c_norm_2"] << ", cond(Z) = " << entry["cond_z"]
                  << ", " << secs << " s\n";
    };
    if (want_square) run_one(SelectMethod::square, "square");
    if (want_rect) run_one(SelectMethod::rect, "rect");
    emit(report, out_path);
    return kExitOk;
}

int run_recsys(const std::string& ratings_path, const std::string& format_name, Index k,
               const std::string& side_name, const std::string& method, double tau,
               const std::string& metrics_csv, const std::string& test_path, Index precision_at,
               double good_threshold, const std::string& out_path) {
    auto pick_format = [](const std::string& name, const std::string& path) {
        if (name == "csv") return RatingsFormat::csv;
        if (name == "dat") return RatingsFormat::movielens_dat;
        return path.size() > 4 && path.substr(path.size() - 4) == ".dat"
                   ? RatingsFormat::movielens_dat
                   : RatingsFormat::csv;
    };
    const RatingsDataset train = load_ratings(ratings_path, pick_format(format_name, ratings_path));
    const Side side = side_name == "users" ? Side::users : Side::items;
    const auto reps = representatives(train, k, side, parse_method(method), tau);

    json flags{{"ratings", ratings_path}, {"format", format_name},
               {"k", static_cast<std::int64_t>(k)}, {"side", side_name},
               {"method", method}, {"tau", tau}, {"metrics", metrics_csv},
               {"test", test_path}, {"precision_at", static_cast<std::int64_t>(precision_at)},
               {"good_threshold", good_threshold}, {"out", out_path}};
    json report = make_report("recsys", flags);
    report["representatives"] = id_array(reps);
    report["count"] = reps.size();
    report["metrics"] = json::object();

    std::stringstream metric_list(metrics_csv);
    std::string metric;
    while (std::getline(metric_list, metric, ',')) {
        if (metric == "coverage") {
            report["metrics"]["coverage"] = coverage(train, reps, side);
        } else if (metric == "diversity") {
            report["metrics"]["diversity"] = diversity(train, reps, side);
        } else if (!metric.empty()) {
            throw CLI::ValidationError("--metrics", "unknown metric '" + metric + "'");
        }
    }

    if (!test_path.empty()) {
        if (side != Side::items)
            throw CLI::ValidationError("--test", "precision evaluation needs --side items");
        const RatingsDataset test = load_ratings(test_path, pick_format(format_name, test_path));
        const PrecisionResult pr = precision_at_n(train, test, reps, precision_at, good_threshold);
        report["precision"] = {{"at", static_cast<std::int64_t>(precision_at)},
                               {"value", pr.value},
                               {"evaluated_users", pr.evaluated_users},
                               {"no_eligible_users", pr.no_eligible_users}};
    }
    emit(report, out_path);

    std::cerr << "recsys: " << reps.size() << " representative " << side_name << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximal-volume submatrix selection toolkit"};
    app.require_subcommand(1);

    // maxvol ------------------------------------------------------------
    auto* sub_maxvol = app.add_subcommand("maxvol", "Square dominant-submatrix selection");
    std::string mv_input, mv_out;
    double mv_eps = 0.05;
    sub_maxvol->add_option("--input", mv_input, "Matrix Market input file")->required();
    sub_maxvol->add_option("--eps", mv_eps, "swap slack (quasi-dominance)")->check(CLI::NonNegativeNumber);
    sub_maxvol->add_option("--out", mv_out, "also write the JSON report to this file");

    // rectmaxvol ----------------------------------------------------------
    auto* sub_rect = app.add_subcommand("rectmaxvol", "Rectangular submatrix growth");
    std::string rm_input, rm_out;
    double rm_tau = 1.0;
    Index rm_min_k = -1, rm_max_k = -1;
    bool rm_identity = false;
    sub_rect->add_option("--input", rm_input, "Matrix Market input file")->required();
    sub_rect->add_option("--tau", rm_tau, "row-norm stopping threshold");
    sub_rect->add_option("--min-k", rm_min_k, "minimum selected rows (default: n_cols)");
    sub_rect->add_option("--max-k", rm_max_k, "maximum selected rows (default: 2*n_cols+1)");
    sub_rect->add_flag("--identity-hat", rm_identity, "unit rows at selected indices");
    sub_rect->add_option("--out", rm_out, "also write the JSON report to this file");

    // cur -----------------------------------------------------------------
    auto* sub_cur = app.add_subcommand("cur", "Pseudo-skeleton (CUR) approximation");
    std::string cur_input, cur_method = "square", cur_out;
    Index cur_rank = 0;
    double cur_tau = 1.0;
    sub_cur->add_option("--input", cur_input, "Matrix Market input file")->required();
    sub_cur->add_option("--rank", cur_rank, "target rank")->required()->check(CLI::PositiveNumber);
    sub_cur->add_option("--method", cur_method, "selection method")
        ->check(CLI::IsMember({"square", "rect"}));
    sub_cur->add_option("--tau", cur_tau, "rect row-norm threshold");
    sub_cur->add_option("--out", cur_out, "also write the JSON report to this file");

    // maxelem ---------------------------------------------------------------
    auto* sub_maxelem = app.add_subcommand("maxelem", "Max-element search trials on random low-rank matrices");
    Index me_rank = 0, me_n = 0, me_m = 0;
    long me_trials = 1;
    std::uint64_t me_seed = 0;
    std::string me_method = "both", me_out;
    double me_tau = 1.0;
    sub_maxelem->add_option("--rank", me_rank, "rank of generated matrices")->required()->check(CLI::PositiveNumber);
    sub_maxelem->add_option("--n", me_n, "rows of generated matrices")->required()->check(CLI::PositiveNumber);
    sub_maxelem->add_option("--m", me_m, "columns of generated matrices")->required()->check(CLI::PositiveNumber);
    sub_maxelem->add_option("--trials", me_trials, "number of random trials")->check(CLI::PositiveNumber);
    sub_maxelem->add_option("--seed", me_seed, "master seed; trial t uses seed + t");
    sub_maxelem->add_option("--method", me_method, "selection method")
        ->check(CLI::IsMember({"square", "rect", "both"}));
    sub_maxelem->add_option("--tau", me_tau, "rect row-norm threshold");
    sub_maxelem->add_option("--out", me_out, "also write the JSON report to this file");

    // precond ---------------------------------------------------------------
    auto* sub_precond = app.add_subcommand("precond", "Augmented-system preconditioning report");
    std::string pc_input, pc_method = "both", pc_rhs, pc_out;
    double pc_tau = 1.0;
    sub_precond->add_option("--input", pc_input, "Matrix Market input file")->required();
    sub_precond->add_option("--method", pc_method, "selection method")
        ->check(CLI::IsMember({"square", "rect", "both"}));
    sub_precond->add_option("--tau", pc_tau, "rect row-norm threshold");
    sub_precond->add_option("--rhs", pc_rhs, "right-hand side (Matrix Market vector) to solve against");
    sub_precond->add_option("--out", pc_out, "also write the JSON report to this file");

    // recsys ------------------------------------------------------------------
    auto* sub_recsys = app.add_subcommand("recsys", "Representative selection and metrics on ratings data");
    std::string rs_ratings, rs_format = "auto", rs_side = "items", rs_method = "square";
    std::string rs_metrics = "coverage,diversity", rs_test, rs_out;
    Index rs_k = 0, rs_precision_at = 10;
    double rs_tau = 1.0, rs_good = 4.0;
    sub_recsys->add_option("--ratings", rs_ratings, "ratings file")->required();
    sub_recsys->add_option("--format", rs_format, "ratings format")
        ->check(CLI::IsMember({"csv", "dat", "auto"}));
    sub_recsys->add_option("--k", rs_k, "SVD rank / base representative count")->required()->check(CLI::PositiveNumber);
    sub_recsys->add_option("--side", rs_side, "select users or items")
        ->check(CLI::IsMember({"users", "items"}));
    sub_recsys->add_option("--method", rs_method, "selection method")
        ->check(CLI::IsMember({"square", "rect"}));
    sub_recsys->add_option("--tau", rs_tau, "rect row-norm threshold");
    sub_recsys->add_option("--metrics", rs_metrics, "comma list: coverage,diversity (empty to skip)");
    sub_recsys->add_option("--test", rs_test, "held-out ratings file for precision");
    sub_recsys->add_option("--precision-at", rs_precision_at, "top-n size for precision")->check(CLI::PositiveNumber);
    sub_recsys->add_option("--good-threshold", rs_good, "rating threshold counting as a good recommendation");
    sub_recsys->add_option("--out", rs_out, "also write the JSON report to this file");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(sub_maxvol)) return run_maxvol(mv_input, mv_eps, mv_out);
        if (app.got_subcommand(sub_rect))
            return run_rect_maxvol(rm_input, rm_tau, rm_min_k, rm_max_k, rm_identity, rm_out);
        if (app.got_subcommand(sub_cur))
            return run_cur(cur_input, cur_rank, cur_method, cur_tau, cur_out);
        if (app.got_subcommand(sub_maxelem))
            return run_maxelem(me_rank, me_n, me_m, me_trials, me_seed, me_method, me_tau, me_out);
        if (app.got_subcommand(sub_precond))
            return run_precond(pc_input, pc_method, pc_tau, pc_rhs, pc_out);
        if (app.got_subcommand(sub_recsys))
            return run_recsys(rs_ratings, rs_format, rs_k, rs_side, rs_method, rs_tau, rs_metrics,
                              rs_test, rs_precision_at, rs_good, rs_out);
        std::cerr << "error: no subcommand given\n";
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const EmptyDatasetError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
