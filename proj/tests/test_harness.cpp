#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nfcsim/capacity.hpp"
#include "nfcsim/channel.hpp"
#include "nfcsim/experiments.hpp"

using namespace nfcsim;

namespace
{
    std::string slurp(const std::string &path)
    {
        std::ifstream is(path, std::ios::binary);
        REQUIRE(is.good());
        std::ostringstream os;
        os << is.rdbuf();
        return os.str();
    }

    // numeric rows of a written CSV (skips '#' metadata and the header)
    std::vector<std::vector<double>> csv_rows(const std::string &text)
    {
        std::vector<std::vector<double>> rows;
        std::istringstream is(text);
        std::string line;
        bool header_seen = false;
        while (std::getline(is, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            if (!header_seen)
            {
                header_seen = true;
                continue;
            }
            std::vector<double> row;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ','))
                row.push_back(std::strtod(cell.c_str(), nullptr));
            rows.push_back(row);
        }
        return rows;
    }

    ExperimentConfig make_cfg(const std::string &name, const std::string &dir)
    {
        ExperimentConfig cfg;
        cfg.experiment = name;
        cfg.out_dir = dir;
        cfg.seed = 12345;
        return cfg;
    }
} // namespace

TEST_CASE("unknown experiments and formats are config errors")
{
    ExperimentConfig cfg = make_cfg("no_such_experiment", "harness_out");
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg.experiment = "g_of_x";
    cfg.format = "xml";
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("experiment registry lists the reference experiments")
{
    const auto names = experiment_names();
    for (const char *want : {"fig4_projected_aperture", "fig7_mac_sumrate", "fig9_mac_regions",
                             "fig10_bc_sumrate", "fig12_bc_regions", "fig13_cap_mac_regions",
                             "fig_bc_cap_regions", "iui_angle", "g_of_x", "iui_range",
                             "fig16_wsr_cdf", "fig17_uca_vs_ula", "fig19_robust_wsr"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());
}

TEST_CASE("g_of_x emits g(15) close to one half and is byte-identical across runs")
{
    const std::string dir = "harness_out_g";
    std::filesystem::remove_all(dir);
    auto cfg = make_cfg("g_of_x", dir + "/a");
    const auto p1 = run_and_write(cfg);
    cfg.out_dir = dir + "/b";
    const auto p2 = run_and_write(cfg);
    REQUIRE(p1.size() == 1);
    const std::string t1 = slurp(p1[0]), t2 = slurp(p2[0]);
    CHECK(t1 == t2);

    bool found = false;
    for (const auto &row : csv_rows(t1))
        if (std::abs(row[0] - 15.0) < 1e-9)
        {
            CHECK(std::abs(row[1] - 0.5) < 0.02);
            found = true;
        }
    CHECK(found);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fig7 rows agree with a direct capacity-module evaluation")
{
    const std::string dir = "harness_out_fig7";
    std::filesystem::remove_all(dir);
    const auto paths = run_and_write(make_cfg("fig7_mac_sumrate", dir));
    const auto rows = csv_rows(slurp(paths[0]));
    REQUIRE(!rows.empty());

    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / (4.0 * arma::datum::pi);
    const UserPose u1(15.0, arma::datum::pi / 6.0, arma::datum::pi / 3.0);
    const UserPose u2(20.0, arma::datum::pi / 6.0, arma::datum::pi / 3.0);
    for (const auto &row : rows)
    {
        const arma::uword mx = static_cast<arma::uword>(std::lround(std::sqrt(row[0])));
        const auto geom = ArrayGeometry::upa(mx, mx, d, A);
        const auto h1 = spd_channel(geom, u1, lambda, ChannelModel::EXACT);
        const auto h2 = spd_channel(geom, u2, lambda, ChannelModel::EXACT);
        const double c = mac_sum_capacity(link_stats(h1.entries, h2.entries), 1000.0);
        CHECK(std::abs(row[1] - c) < 0.1);
    }

    // far-field same-direction capacity grows strictly across the sweep
    for (size_t i = 1; i < rows.size(); i++)
        CHECK(rows[i][3] > rows[i - 1][3]);
    std::filesystem::remove_all(dir);
}

TEST_CASE("emitted rate-region tables pass concavity validation")
{
    const std::string dir = "harness_out_regions";
    std::filesystem::remove_all(dir);
    auto cfg = make_cfg("fig12_bc_regions", dir);
    cfg.params["grid"] = 64;
    const auto paths = run_and_write(cfg);
    CHECK(paths.size() > 1);
    for (size_t i = 1; i < paths.size(); i++)
    {
        const auto rows = csv_rows(slurp(paths[i]));
        RateRegion reg;
        for (const auto &r : rows)
            reg.points.push_back({r[0], r[1], r[2] > 0.5, ""});
        CHECK(reg.concave(1e-9));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("montecarlo CDF: single trial, order invariance, and the NF/FF gap")
{
    const std::string dir = "harness_out_cdf";
    std::filesystem::remove_all(dir);
    auto cfg = make_cfg("fig16_wsr_cdf", dir + "/t1");
    cfg.trials = 1;
    cfg.params["M"] = 64;
    cfg.params["K"] = 4;
    const auto p1 = run_and_write(cfg);
    auto rows = csv_rows(slurp(p1[0]));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == 1.0);

    // more trials: near-field median dominates the far-field design
    auto cfg2 = make_cfg("fig16_wsr_cdf", dir + "/t20");
    cfg2.trials = 21;
    cfg2.params["M"] = 64;
    cfg2.params["K"] = 4;
    const auto p2 = run_and_write(cfg2);
    rows = csv_rows(slurp(p2[0]));
    REQUIRE(rows.size() == 21);
    CHECK(rows[10][1] >= rows[10][2]);

    // thread count must not change the sorted output bytes
    auto cfg3 = cfg2;
    cfg3.out_dir = dir + "/t20_mt";
    cfg3.threads = 4;
    const auto p3 = run_and_write(cfg3);
    CHECK(slurp(p2[0]) == slurp(p3[0]));
    std::filesystem::remove_all(dir);
}

TEST_CASE("fig17: UCA sum rate is direction-robust, ULA is not")
{
    const std::string dir = "harness_out_uca";
    std::filesystem::remove_all(dir);
    const auto paths = run_and_write(make_cfg("fig17_uca_vs_ula", dir));
    const auto rows = csv_rows(slurp(paths[0]));
    REQUIRE(!rows.empty());
    double ula_min = 1e300, ula_max = 0.0, uca_min = 1e300, uca_max = 0.0;
    double ula_at10 = 0.0, uca_at10 = 0.0;
    for (const auto &row : rows)
    {
        ula_min = std::min(ula_min, row[1]);
        ula_max = std::max(ula_max, row[1]);
        uca_min = std::min(uca_min, row[2]);
        uca_max = std::max(uca_max, row[2]);
        if (std::abs(row[0] - 10.0) < 1e-9)
        {
            ula_at10 = row[1];
            uca_at10 = row[2];
        }
    }
    CHECK((uca_max - uca_min) / uca_max < 0.05);
    CHECK(ula_max / ula_min > uca_max / uca_min);
    CHECK(uca_at10 >= ula_at10);
    std::filesystem::remove_all(dir);
}

TEST_CASE("JSON output carries metadata and rows")
{
    const std::string dir = "harness_out_json";
    std::filesystem::remove_all(dir);
    auto cfg = make_cfg("g_of_x", dir);
    cfg.format = "json";
    const auto paths = run_and_write(cfg);
    const std::string text = slurp(paths[0]);
    CHECK(text.find("\"metadata\"") != std::string::npos);
    CHECK(text.find("\"seed\": \"12345\"") != std::string::npos);
    CHECK(text.find("\"columns\"") != std::string::npos);
    std::filesystem::remove_all(dir);
}

#ifdef NFCSIM_CLI_PATH
TEST_CASE("CLI exit codes: success, config error")
{
    const std::string dir = "harness_out_cli";
    std::filesystem::remove_all(dir);
    const std::string cli = NFCSIM_CLI_PATH;
    CHECK(std::system((cli + " g_of_x --out " + dir + " > /dev/null 2>&1").c_str()) == 0);
    const int bad = std::system((cli + " nonsense --out " + dir + " > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(bad) == 2);
    std::filesystem::remove_all(dir);
}
#endif
