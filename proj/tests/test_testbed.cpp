#include "vorgp/testbed.hpp"

#include "vorgp/io.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace vorgp;

namespace {

Vector pt(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("diamond test function") {
    const TestFunction f = eta1();
    CHECK(f.inside(pt(0.5, 0.5)));
    CHECK(f.eval(pt(0.5, 0.5)) ==
          doctest::Approx(std::sin(0.5) + std::cos(0.5)).epsilon(1e-12));
    CHECK(f.eval(pt(0.5, 0.5)) == doctest::Approx(1.357008).epsilon(1e-6));

    CHECK(!f.inside(pt(0.0, 0.0)));
    CHECK(f.eval(pt(0.0, 0.0)) == doctest::Approx(11.0));

    // branch offset is exactly 10 across the lower-left edge (x1 + x2 = 0.8)
    const double just_in = f.eval(pt(0.3 + 1e-9, 0.5));
    const double just_out = f.eval(pt(0.3 - 1e-9, 0.5));
    CHECK(just_out - just_in == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("curved test function follows the printed membership clauses") {
    const TestFunction f = eta2();
    // base at the origin is 3; the origin is outside the composite set
    CHECK(!f.inside(pt(0.0, 0.0)));
    CHECK(f.eval(pt(0.0, 0.0)) == doctest::Approx(3.0).epsilon(1e-12));

    // the third disc's centre lies in the band clause and the disc itself
    CHECK(f.inside(pt(0.4125, 0.3)));

    // offset is exactly 10 and consistent with the indicator everywhere
    RngStream rng(77);
    for (int t = 0; t < 500; ++t) {
        const Vector x = pt(rng.uniform01(), rng.uniform01());
        const double s = 10.0 * x[0] * x[0] + 5.0 * x[1] * x[1];
        const double base = x[0] * x[0] + 5.0 * x[1] * x[1] + 3.0 * std::cos(s);
        const double diff = f.eval(x) - base;
        if (f.inside(x)) {
            CHECK(diff == doctest::Approx(10.0).epsilon(1e-12));
        } else {
            CHECK(diff == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("curved membership matches the frozen indicator fixture") {
    // 50x50 indicator bitmap; any change to the set interpretation shows up
    // as a diff against tests/fixtures/eta2_indicator.txt
    const TestFunction f = eta2();
    std::string bitmap;
    for (int iy = 0; iy < 50; ++iy) {
        for (int ix = 0; ix < 50; ++ix) {
            const Vector x = pt(ix / 49.0, iy / 49.0);
            bitmap += f.inside(x) ? '1' : '0';
        }
        bitmap += '\n';
    }
    std::ifstream fixture(std::string(TEST_FIXTURE_DIR) + "/eta2_indicator.txt");
    REQUIRE(fixture.good());
    std::string expected((std::istreambuf_iterator<char>(fixture)),
                         std::istreambuf_iterator<char>());
    CHECK(bitmap == expected);
}

TEST_CASE("synthetic 6-d function has the fixed offset structure") {
    const TestFunction f = synthetic6d();
    RngStream rng(31);
    for (int t = 0; t < 200; ++t) {
        Vector x(6);
        for (int j = 0; j < 6; ++j) {
            x[j] = rng.uniform01();
        }
        // removing the offset where the indicator claims it leaves the
        // smooth base, which is bounded by the sum of its term amplitudes
        const double base = f.eval(x) - (f.inside(x) ? 10.0 : 0.0);
        CHECK(std::abs(base) <= 3.3);
    }
    Vector centre = Vector::Constant(6, 0.5);
    CHECK(f.inside(centre));
    Vector corner = Vector::Zero(6);
    corner[5] = 1.0;
    CHECK(!f.inside(corner));
}

TEST_CASE("latin hypercube strata and reproducibility") {
    RngStream rng(8);
    const Matrix lhs = lhs_sample(24, 3, rng);
    for (int j = 0; j < 3; ++j) {
        std::vector<bool> hit(24, false);
        for (int i = 0; i < 24; ++i) {
            const int stratum = static_cast<int>(lhs(i, j) * 24);
            CHECK(!hit[stratum]);
            hit[stratum] = true;
        }
    }

    RngStream r1(42), r2(42);
    const Matrix a = maximin_lhs(20, 2, r1, 3);
    const Matrix b = maximin_lhs(20, 2, r2, 3);
    CHECK(a == b);  // bit-exact given the seed
}

TEST_CASE("maximin optimisation only improves the raw draw") {
    RngStream raw_rng(7), opt_rng(7);
    const Matrix raw = lhs_sample(40, 2, raw_rng);
    const Matrix opt = maximin_lhs(40, 2, opt_rng, 1);
    CHECK(min_pairwise_distance(opt) >= min_pairwise_distance(raw));

    // strata survive the swap moves
    for (int j = 0; j < 2; ++j) {
        std::vector<bool> hit(40, false);
        for (int i = 0; i < 40; ++i) {
            const int stratum = static_cast<int>(opt(i, j) * 40);
            CHECK(!hit[stratum]);
            hit[stratum] = true;
        }
    }
}

TEST_CASE("the 80-point benchmark design is well spread") {
    RngStream rng(derive_seed(1, Stream::design));
    const Matrix design = maximin_lhs(80, 2, rng, 5);
    CHECK(min_pairwise_distance(design) > 0.04);
}

TEST_CASE("grid_2d covers the unit square inclusively") {
    const Matrix g = grid_2d(100, 100);
    CHECK(g.rows() == 10000);
    CHECK(g.minCoeff() == 0.0);
    CHECK(g.maxCoeff() == 1.0);
    CHECK(g(0, 0) == 0.0);
    CHECK(g(1, 0) == doctest::Approx(1.0 / 99.0));  // first axis fastest
    CHECK(g(9999, 0) == 1.0);
    CHECK(g(9999, 1) == 1.0);
}

TEST_CASE("micro benchmark run produces a coherent report") {
    BenchmarkConfig cfg;
    cfg.seed = 3;
    cfg.n_iterations = 300;
    cfg.thinning = 10;
    cfg.grid_per_axis = 40;
    cfg.chain_fit.n_restarts = 2;
    cfg.chain_fit.max_evals = 60;
    cfg.full_fit.n_restarts = 3;

    BenchmarkArtifacts artifacts;
    const BenchmarkReport rep = run_benchmark("diamond", cfg, &artifacts);
    CHECK(rep.scenario == "diamond");
    CHECK(rep.n_data == 80);
    CHECK(rep.mse_proposed > 0.0);
    CHECK(rep.mse_single_gp > 0.0);
    CHECK(std::isfinite(rep.mse_proposed));
    double mass = 0.0;
    for (const auto& [r, p] : rep.region_count_posterior) {
        mass += p;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.literature_values.at("standard_gp") == doctest::Approx(2.04));
    CHECK(artifacts.chain.samples.size() > 0);
    CHECK(artifacts.grid.rows() == 40 * 40);

    // report schema round-trips through the JSON writer
    write_benchmark_report("micro_report.json", rep);
    std::ifstream in("micro_report.json");
    REQUIRE(in.good());
    nlohmann::json parsed;
    in >> parsed;
    CHECK(parsed.at("scenario") == "diamond");
    CHECK(parsed.at("mse_proposed").get<double>() == rep.mse_proposed);
    CHECK(parsed.at("literature_values").at("proposed").get<double>() == 1.84);

    CHECK_THROWS_AS(run_benchmark("unknown", cfg), ArgumentError);
}
