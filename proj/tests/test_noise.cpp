#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gsopt/errors.hpp"
#include "gsopt/noise.hpp"

using Catch::Approx;
using namespace gsopt;

namespace {

// Empirical mean of ||eps||^2 over n draws.
double mean_sq_norm(const NoiseModel& m, std::size_t dim, int n, std::uint64_t seed) {
    RngStream rng(seed, 7);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec e = m.sample(rng, dim);
        double s = 0.0;
        for (double v : e) s += v * v;
        acc += s;
    }
    return acc / n;
}

} // namespace

TEST_CASE("seeded stream reproducibility") {
    RngStream a(42, 3), b(42, 3);
    for (int i = 0; i < 100; ++i) REQUIRE(a.uniform01() == b.uniform01());
    CHECK(a.counter() == b.counter());

    // Distinct streams from the same seed decorrelate immediately.
    RngStream c(42, 4);
    bool differs = false;
    RngStream a2(42, 3);
    for (int i = 0; i < 10; ++i) differs = differs || (a2.uniform01() != c.uniform01());
    CHECK(differs);

    RngStream n1(7, 0), n2(7, 0);
    for (int i = 0; i < 100; ++i) REQUIRE(n1.normal() == n2.normal());
}

TEST_CASE("uniform01 stays inside the open interval") {
    RngStream rng(123, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("noise models hit the declared second moment") {
    const int n = 200000;
    for (std::size_t dim : {std::size_t{1}, std::size_t{4}}) {
        CHECK(mean_sq_norm(NoiseModel::gaussian(1.0), dim, n, 1) == Approx(1.0).epsilon(0.02));
        CHECK(mean_sq_norm(NoiseModel::gaussian(2.0), dim, n, 2) == Approx(4.0).epsilon(0.02));
        CHECK(mean_sq_norm(NoiseModel::student_t(1.0, 5.0), dim, n, 3) ==
              Approx(1.0).epsilon(0.1));
        CHECK(mean_sq_norm(NoiseModel::bounded_uniform(1.0), dim, n, 4) ==
              Approx(1.0).epsilon(0.02));
    }

    SECTION("bounded draws never exceed sigma*sqrt(3)") {
        NoiseModel m = NoiseModel::bounded_uniform(2.0);
        RngStream rng(5, 0);
        const double cap = 2.0 * std::sqrt(3.0) + 1e-12;
        for (int i = 0; i < 10000; ++i) {
            for (double v : m.sample(rng, 2)) CHECK(std::abs(v) <= cap / std::sqrt(2.0));
        }
    }

    SECTION("none draws zero and burns no randomness") {
        RngStream rng(1, 0);
        const Vec e = NoiseModel::none().sample(rng, 3);
        for (double v : e) CHECK(v == 0.0);
        CHECK(rng.counter() == 0);
    }
}

TEST_CASE("noise model validation and serialization") {
    CHECK_THROWS_AS(NoiseModel::gaussian(-1.0), ParameterError);
    CHECK_THROWS_AS(NoiseModel::student_t(1.0, 2.0), ParameterError);
    CHECK_THROWS_AS(NoiseModel::bounded_uniform(-0.1), ParameterError);

    NoiseModel m = NoiseModel::student_t(1.5, 4.0);
    NoiseModel m2 = NoiseModel::from_json(m.to_json());
    CHECK(m2.kind == NoiseModel::Kind::StudentT);
    CHECK(m2.sigma == 1.5);
    CHECK(m2.nu == 4.0);

    // Identical models replay identically from the same stream state.
    RngStream r1(9, 2), r2(9, 2);
    const Vec e1 = m.sample(r1, 3);
    const Vec e2 = m2.sample(r2, 3);
    REQUIRE(e1.size() == e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) CHECK(e1[i] == e2[i]);

    CHECK_THROWS_AS(NoiseModel::from_json({{"kind", "gaussian"}}), ConfigError);
    CHECK_THROWS_AS(NoiseModel::from_json({{"kind", "gaussian"}, {"sigma", 1.0}, {"x", 1}}),
                    ConfigError);
    CHECK_THROWS_AS(NoiseModel::from_json({{"kind", "cauchy"}, {"sigma", 1.0}}), ConfigError);
}
