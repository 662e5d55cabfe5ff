#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "csr/lp.hpp"

using namespace csr::lp;

namespace {

Model textbook() {
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18.
    Model m;
    const int x = m.add_var(0, kInf, 3, "x");
    const int y = m.add_var(0, kInf, 5, "y");
    m.add_row({{x, 1}}, Sense::le, 4);
    m.add_row({{y, 2}}, Sense::le, 12);
    m.add_row({{x, 3}, {y, 2}}, Sense::le, 18);
    return m;
}

Model random_lp(std::mt19937_64& eng, int n, int rows) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Model m;
    for (int j = 0; j < n; ++j) m.add_var(0, 5.0 * u(eng), u(eng));
    for (int i = 0; i < rows; ++i) {
        std::vector<Term> t;
        for (int j = 0; j < n; ++j) t.push_back({j, u(eng)});
        m.add_row(t, i % 3 == 2 ? Sense::ge : Sense::le, i % 3 == 2 ? 0.1 * u(eng) : 1.0 + 3.0 * u(eng));
    }
    return m;
}

}  // namespace

TEST(Simplex, Textbook) {
    const auto r = solve(textbook());
    ASSERT_EQ(r.status, Status::optimal);
    EXPECT_NEAR(r.objective, 36, 1e-9);
    EXPECT_NEAR(r.x[0], 2, 1e-9);
    EXPECT_NEAR(r.x[1], 6, 1e-9);
    EXPECT_NEAR(r.duals[0], 0.0, 1e-9);
    EXPECT_NEAR(r.duals[1], 1.5, 1e-9);
    EXPECT_NEAR(r.duals[2], 1.0, 1e-9);
}

TEST(Simplex, MinimizationWithEqualityAndFreeVariable) {
    // min x + 2y, x + y = 3, x - y >= -1, y free, x in [0, 10].
    Model m;
    m.maximize = false;
    const int x = m.add_var(0, 10, 1);
    const int y = m.add_var(-kInf, kInf, 2);
    m.add_row({{x, 1}, {y, 1}}, Sense::eq, 3);
    m.add_row({{x, 1}, {y, -1}}, Sense::ge, -1);
    const auto r = solve(m);
    ASSERT_EQ(r.status, Status::optimal);
    // y = 3 - x decreases the objective as x grows: x = 10, y = -7.
    EXPECT_NEAR(r.x[0], 10, 1e-9);
    EXPECT_NEAR(r.x[1], -7, 1e-9);
    EXPECT_NEAR(r.objective, -4, 1e-9);
}

TEST(Simplex, InfeasibleAndUnbounded) {
    Model a;
    const int x = a.add_var(0, kInf, 1);
    a.add_row({{x, 1}}, Sense::le, 1);
    a.add_row({{x, 1}}, Sense::ge, 2);
    EXPECT_EQ(solve(a).status, Status::infeasible);

    Model b;
    const int y = b.add_var(0, kInf, 1);
    const int z = b.add_var(0, kInf, 0);
    b.add_row({{y, 1}, {z, -1}}, Sense::le, 1);
    EXPECT_EQ(solve(b).status, Status::unbounded);
}

TEST(Simplex, InvertedBoundsAreInfeasible) {
    Model m;
    m.add_var(0, 1, 1);
    const std::vector<double> lo{2}, hi{1};
    EXPECT_EQ(solve(m, lo, hi).status, Status::infeasible);
    EXPECT_THROW(solve(m, std::vector<double>{}, hi), std::invalid_argument);
}

TEST(Simplex, DualsMatchFiniteDifferences) {
    std::mt19937_64 eng(42);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Model m = random_lp(eng, 5, 6);
        const auto base = solve(m);
        ASSERT_EQ(base.status, Status::optimal);
        for (std::size_t i = 0; i < m.row_count(); ++i) {
            const double h = 1e-6;
            Model up = m;
            up.rows[i].rhs += h;
            Model dn = m;
            dn.rows[i].rhs -= h;
            const auto ru = solve(up);
            const auto rd = solve(dn);
            if (ru.status != Status::optimal || rd.status != Status::optimal) continue;
            const double fu = (ru.objective - base.objective) / h;
            const double fd = (base.objective - rd.objective) / h;
            // Skip degenerate rows where one-sided derivatives differ.
            if (std::abs(fu - fd) > 1e-5) continue;
            EXPECT_NEAR(base.duals[i], fu, 1e-5) << "trial " << trial << " row " << i;
            ++checked;
        }
    }
    EXPECT_GT(checked, 150);
}

TEST(Simplex, WeakDualityOnRandomLps) {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Model m = random_lp(eng, 6, 5);
        const auto r = solve(m);
        ASSERT_EQ(r.status, Status::optimal);
        for (const auto& row : m.rows) {
            double lhs = 0;
            for (const auto& t : row.terms) lhs += t.coef * r.x[static_cast<std::size_t>(t.var)];
            if (row.sense == Sense::le) {
                EXPECT_LE(lhs, row.rhs + 1e-8);
            } else if (row.sense == Sense::ge) {
                EXPECT_GE(lhs, row.rhs - 1e-8);
            }
        }
        for (std::size_t j = 0; j < m.var_count(); ++j) {
            EXPECT_GE(r.x[j], m.lower[j] - 1e-9);
            EXPECT_LE(r.x[j], m.upper[j] + 1e-9);
        }
    }
}

TEST(Milp, KnapsackMatchesEnumeration) {
    std::mt19937_64 eng(3);
    std::uniform_int_distribution<int> w(1, 20);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 10;
        std::vector<double> value(n), weight(n);
        Model m;
        std::vector<Term> cap;
        for (int j = 0; j < n; ++j) {
            value[static_cast<std::size_t>(j)] = w(eng);
            weight[static_cast<std::size_t>(j)] = w(eng);
            m.add_binary(value[static_cast<std::size_t>(j)]);
            cap.push_back({j, weight[static_cast<std::size_t>(j)]});
        }
        m.add_row(cap, Sense::le, 40);
        double best = 0;
        for (int mask = 0; mask < (1 << n); ++mask) {
            double v = 0, c = 0;
            for (int j = 0; j < n; ++j) {
                if (mask >> j & 1) {
                    v += value[static_cast<std::size_t>(j)];
                    c += weight[static_cast<std::size_t>(j)];
                }
            }
            if (c <= 40) best = std::max(best, v);
        }
        const auto r = solve_milp(m);
        ASSERT_EQ(r.status, MilpStatus::optimal);
        EXPECT_NEAR(r.objective, best, 1e-6);
    }
}

TEST(Milp, CutoffHidesWorseSolutions) {
    Model m;
    const int x = m.add_var(0, 3, 1, "x", true);
    m.add_row({{x, 2}}, Sense::le, 5);
    MilpOptions opt;
    EXPECT_NEAR(solve_milp(m, opt).objective, 2, 1e-9);
    opt.cutoff = 2.0;
    EXPECT_EQ(solve_milp(m, opt).status, MilpStatus::infeasible);
}

TEST(Milp, NodeLimitThrows) {
    std::mt19937_64 eng(5);
    std::uniform_int_distribution<int> w(10, 99);
    Model m;
    std::vector<Term> cap;
    double total = 0;
    for (int j = 0; j < 30; ++j) {
        const double c = w(eng);
        m.add_binary(c + 0.5);
        cap.push_back({j, c});
        total += c;
    }
    m.add_row(cap, Sense::le, std::floor(total / 2) + 0.5);
    MilpOptions opt;
    opt.node_limit = 3;
    try {
        solve_milp(m, opt);
        FAIL();
    } catch (const NodeLimitExceeded& e) {
        EXPECT_GE(e.best_bound(), e.incumbent());
    }
}

TEST(Milp, RequiresMaximization) {
    Model m;
    m.maximize = false;
    m.add_binary(1);
    EXPECT_THROW(solve_milp(m), std::invalid_argument);
}

TEST(LpFormat, Sections) {
    Model m = textbook();
    m.add_binary(1, "b");
    std::ostringstream os;
    write_lp_format(os, m);
    const std::string s = os.str();
    for (const char* part : {"Maximize\n obj: 3 x + 5 y + 1 b", "Subject To", "Bounds", "Generals\n b", "End"}) {
        EXPECT_NE(s.find(part), std::string::npos) << part;
    }
}
