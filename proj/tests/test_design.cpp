#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "alleezone/design.hpp"

using namespace alleezone;
using Catch::Matchers::WithinAbs;

namespace {
const GrowthPair kGrowth = GrowthPair::cubic_logistic(0.2, 0.1);
constexpr double kPi = std::numbers::pi;

double lam1(double L, double alpha, double l, const BoundarySpec& bc) {
    return principal_eigenvalue(ZoneLayout(L, alpha, l), bc, kGrowth).lambda1;
}
} // namespace

TEST_CASE("optimal starts per boundary family") {
    const auto nn = optimal_alpha(4.0, 10.0, BoundarySpec::neumann_neumann(), kGrowth);
    REQUIRE(nn.size() == 2);
    CHECK(nn[0] == 0.0);
    CHECK(nn[1] == 6.0);

    const auto dd = optimal_alpha(4.0, 10.0, BoundarySpec::dirichlet_dirichlet(), kGrowth);
    REQUIRE(dd.size() == 1);
    CHECK(dd[0] == 3.0);

    CHECK(optimal_alpha(4.0, 10.0, BoundarySpec::neumann_dirichlet(), kGrowth) ==
          std::vector<double>{0.0});
    CHECK(optimal_alpha(4.0, 10.0, BoundarySpec::dirichlet_neumann(), kGrowth) ==
          std::vector<double>{6.0});
}

TEST_CASE("Robin optimum is a true minimiser") {
    const BoundarySpec bc(1.0, 1.0, 1.0, 0.0); // Robin left, Neumann right
    const auto stars = optimal_alpha(4.0, 10.0, bc, kGrowth);
    REQUIRE(stars.size() == 1);
    const double v_star = lam1(10.0, stars[0], 4.0, bc);
    for (int i = 0; i <= 50; ++i) {
        const double a = 6.0 * i / 50.0;
        CHECK(v_star <= lam1(10.0, a, 4.0, bc) + 1e-8);
    }
}

TEST_CASE("critical lengths: closed thresholds and sharp crossings") {
    SECTION("Neumann pair") {
        const auto bars = critical_lengths(BoundarySpec::neumann_neumann(), kGrowth, 10.0);
        REQUIRE(bars.count("l1_bar") == 1);
        CHECK_THAT(bars.at("l1_bar"), WithinAbs(kPi / (2.0 * std::sqrt(0.2)), 1e-12));
        REQUIRE(bars.count("l2_bar") == 1);
        CHECK_THAT(bars.at("l2_bar"), WithinAbs(0.599740, 1e-4));
        // l2_bar is the zero crossing of the end-zone eigenvalue
        CHECK_THAT(lam1(10.0, 0.0, bars.at("l2_bar"), BoundarySpec::neumann_neumann()),
                   WithinAbs(0.0, 1e-8));
    }
    SECTION("Dirichlet pair") {
        const auto bars = critical_lengths(BoundarySpec::dirichlet_dirichlet(), kGrowth, 10.0);
        REQUIRE(bars.count("l1_bar") == 1);
        CHECK_THAT(bars.at("l1_bar"), WithinAbs(kPi / std::sqrt(0.2), 1e-12));
        REQUIRE(bars.count("l2_bar") == 1);
        CHECK_THAT(bars.at("l2_bar"), WithinAbs(2.605609, 1e-4));
        const double l2 = bars.at("l2_bar");
        CHECK_THAT(lam1(10.0, (10.0 - l2) / 2.0, l2, BoundarySpec::dirichlet_dirichlet()),
                   WithinAbs(0.0, 1e-8));
    }
    SECTION("mixed pairs order their thresholds") {
        for (const auto& bc : {BoundarySpec::neumann_dirichlet(), BoundarySpec::dirichlet_neumann()}) {
            const auto bars = critical_lengths(bc, kGrowth, 10.0);
            REQUIRE(bars.count("l1_bar") == 1);
            REQUIRE(bars.count("l2_bar") == 1);
            REQUIRE(bars.count("l3_bar") == 1);
            CHECK(bars.at("l3_bar") < bars.at("l2_bar"));
            CHECK(bars.at("l2_bar") < bars.at("l1_bar"));
            const double l3 = bars.at("l3_bar");
            const double best =
                boundary_family(bc) == BoundaryFamily::ND ? 0.0 : 10.0 - l3;
            CHECK_THAT(lam1(10.0, best, l3, bc), WithinAbs(0.0, 1e-8));
        }
    }
    SECTION("short hostile habitat has no thresholds") {
        const auto bars = critical_lengths(BoundarySpec::dirichlet_dirichlet(), kGrowth, 5.0);
        CHECK(bars.empty());
    }
    SECTION("Robin pairs are out of closed-form coverage") {
        CHECK(critical_lengths(BoundarySpec(1.0, 1.0, 1.0, 0.0), kGrowth, 10.0).empty());
    }
}

TEST_CASE("design reports") {
    SECTION("NN with a long zone persists anywhere") {
        const auto rep = design_report(10.0, BoundarySpec::neumann_neumann(), kGrowth, 4.0);
        CHECK(rep.alpha_star.kind == AlphaStar::Kind::Anywhere);
        CHECK(rep.verdict_at_optimum.verdict == Fate::Persist);
        CHECK(rep.regime == "NN persist-anywhere");
    }
    SECTION("DD with a mid-length zone needs the centre placement") {
        const auto rep = design_report(10.0, BoundarySpec::dirichlet_dirichlet(), kGrowth, 3.0);
        REQUIRE(rep.alpha_star.kind == AlphaStar::Kind::Values);
        REQUIRE(rep.alpha_star.values.size() == 1);
        CHECK_THAT(rep.alpha_star.values[0], WithinAbs(3.5, 1e-12));
        CHECK(rep.verdict_at_optimum.verdict == Fate::Persist);
        CHECK(rep.verdict_at_optimum.lambda1 < 0.0);
    }
    SECTION("short Dirichlet habitat is hopeless for any zone") {
        const auto rep = design_report(5.0, BoundarySpec::dirichlet_dirichlet(), kGrowth, 3.0);
        CHECK(rep.alpha_star.kind == AlphaStar::Kind::None);
        CHECK(rep.regime == "DD extinct-everywhere");
    }
    SECTION("recommended layout's sign is re-verified") {
        const auto rep = design_report(10.0, BoundarySpec::neumann_dirichlet(), kGrowth, 4.0);
        REQUIRE(rep.alpha_star.kind == AlphaStar::Kind::Values);
        const double lam = lam1(10.0, rep.alpha_star.values[0], 4.0,
                                BoundarySpec::neumann_dirichlet());
        CHECK((lam < 0.0) == (rep.verdict_at_optimum.verdict == Fate::Persist));
    }
    SECTION("no zone length: thresholds only") {
        const auto rep = design_report(10.0, BoundarySpec::neumann_neumann(), kGrowth);
        CHECK(rep.alpha_star.kind == AlphaStar::Kind::None);
        CHECK(!rep.l_bars.empty());
    }
}

TEST_CASE("sweep tables") {
    const std::vector<double> alphas{0.0, 1.5, 3.0, 4.5, 6.0};
    const std::vector<double> ls{4.0, 8.0};

    SECTION("NN row is symmetric with its maximum at the midpoint") {
        const auto t = sweep(10.0, BoundarySpec::neumann_neumann(), kGrowth, alphas, ls);
        CHECK_THAT(t.at(0, 0), WithinAbs(t.at(4, 0), 1e-9));
        CHECK_THAT(t.at(1, 0), WithinAbs(t.at(3, 0), 1e-9));
        CHECK(t.at(2, 0) > t.at(1, 0));
        CHECK(t.at(1, 0) > t.at(0, 0));
    }
    SECTION("DD row is symmetric with its minimum at the midpoint") {
        const auto t = sweep(10.0, BoundarySpec::dirichlet_dirichlet(), kGrowth, alphas, ls);
        CHECK_THAT(t.at(0, 0), WithinAbs(t.at(4, 0), 1e-9));
        CHECK(t.at(2, 0) < t.at(1, 0));
        CHECK(t.at(1, 0) < t.at(0, 0));
    }
    SECTION("infeasible cells are absent") {
        const auto t = sweep(10.0, BoundarySpec::neumann_neumann(), kGrowth, alphas, ls);
        CHECK(std::isnan(t.at(4, 1))); // alpha 6 + l 8 > L
        CHECK(!std::isnan(t.at(0, 1)));
    }
    SECTION("nearly-Neumann Robin row matches the Neumann table") {
        const auto ref = sweep(10.0, BoundarySpec::neumann_neumann(), kGrowth, alphas, {4.0});
        const auto rob = sweep(10.0, BoundarySpec(1.0, 1e-8, 1.0, 0.0), kGrowth, alphas, {4.0});
        for (std::size_t i = 0; i < alphas.size(); ++i)
            CHECK_THAT(rob.at(i, 0), WithinAbs(ref.at(i, 0), 1e-5));
    }
}
