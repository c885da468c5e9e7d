#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../tools/cli.hpp"
#include "sepbound.hpp"

using namespace sepbound;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "sepbound");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

/// Data rows of a delimited table as column -> value maps; '#' lines skipped.
std::vector<std::map<std::string, std::string>> rows_of(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;
    const auto split = [](const std::string& s) {
        std::vector<std::string> f;
        std::stringstream ss(s);
        std::string x;
        while (std::getline(ss, x, ',')) f.push_back(x);
        return f;
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split(line);
        if (header.empty()) {
            header = fields;
            continue;
        }
        EXPECT_EQ(fields.size(), header.size()) << line;
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < fields.size() && i < header.size(); ++i) row[header[i]] = fields[i];
        rows.push_back(row);
    }
    return rows;
}

double num(const std::map<std::string, std::string>& row, const std::string& col) { return std::stod(row.at(col)); }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::path(SEPBOUND_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path) << text;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class EnvGuard {
public:
    EnvGuard(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
    ~EnvGuard() { unsetenv(name_); }
    EnvGuard(const EnvGuard&) = delete;
    EnvGuard& operator=(const EnvGuard&) = delete;

private:
    const char* name_;
};

}  // namespace

TEST(ParseGrid, RangesAndLists) {
    EXPECT_EQ(cli::parse_grid("1:2:0.5"), (std::vector<double>{1.0, 1.5, 2.0}));
    const auto g = cli::parse_grid("0.05:1:0.05");
    ASSERT_EQ(g.size(), 20u);
    EXPECT_NEAR(g.back(), 1.0, 1e-12);
    EXPECT_EQ(cli::parse_grid("0.1,0.4,1e0"), (std::vector<double>{0.1, 0.4, 1.0}));
    EXPECT_EQ(cli::parse_grid("3"), (std::vector<double>{3.0}));
    EXPECT_THROW(cli::parse_grid(""), DomainError);
    EXPECT_THROW(cli::parse_grid("1:2"), DomainError);
    EXPECT_THROW(cli::parse_grid("2:1:0.1"), DomainError);
    EXPECT_THROW(cli::parse_grid("1:2:0"), DomainError);
    EXPECT_THROW(cli::parse_grid("1,1"), DomainError);
    EXPECT_THROW(cli::parse_grid("1,x"), DomainError);
}

TEST(Cli, BoundReproducesPublishedValues) {
    for (const auto& [loss, want] : {std::pair{"0.0298", 0.7251}, std::pair{"0.4516", 0.5750}}) {
        const auto r = run({"bound", "--loss", loss, "--beta", "4", "--classes", "10"});
        ASSERT_EQ(r.code, 0) << r.err;
        const auto rows = rows_of(r.out);
        ASSERT_EQ(rows.size(), 1u);
        EXPECT_NEAR(num(rows[0], "value"), want, 0.01) << loss;
        EXPECT_EQ(num(rows[0], "kappa"), 9.0);
        EXPECT_EQ(rows[0].at("method"), "chi2_cdf");
        EXPECT_NEAR(num(rows[0], "value"), num(rows[0], "b_A_at_argmax") * num(rows[0], "chi2_window"), 1e-8);
        EXPECT_EQ(r.out.rfind("# sepbound", 0), 0u);
    }
}

TEST(Cli, BoundVerifyReportsMonteCarlo) {
    const auto r = run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10", "--verify", "--samples", "100000",
                        "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_LE(num(rows[0], "mc_sigma"), 4.0);
    EXPECT_NE(r.out.find("seed=3"), std::string::npos);
}

TEST(Cli, FlagErrorsExitTwo) {
    EXPECT_EQ(run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10", "--gamma", "0.5"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "-1", "--beta", "4", "--classes", "10"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "1"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10", "--kappa", "0.5"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10", "--grid-step", "0.7"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10", "--method", "exact"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "0.4", "--beta", "4"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "abc", "--beta", "4", "--classes", "10"}).code, 2);
    EXPECT_EQ(run({"bound", "--bogus"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"nonsense"}).code, 2);
    EXPECT_EQ(run({"ccdf", "--loss", "", "--beta", "4", "--classes", "10"}).code, 2);
    EXPECT_EQ(run({"bc-sweep", "--beta", "4", "--loss", " "}).code, 2);
    EXPECT_EQ(run({"ba-sweep", "--loss", "0.4", "--beta", "4", "--classes", "10", "--gamma", "0.5,2"}).code, 2);
    EXPECT_EQ(run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10", "--format", "xml"}).code, 2);
    const auto r = run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10", "--gamma", "0.5"});
    EXPECT_NE(r.err.find("gamma"), std::string::npos) << r.err;
}

TEST(Cli, NonConvergenceExitsThree) {
    EnvGuard rel("SEPBOUND_REL_TOL_2D", "1e-13");
    EnvGuard evals("SEPBOUND_MAX_EVALS", "200");
    const auto r = run({"bound", "--loss", "0.4", "--beta", "4", "--classes", "10"});
    EXPECT_EQ(r.code, 3) << r.err;
    EXPECT_NE(r.err.find("estimate"), std::string::npos) << r.err;
}

TEST(Cli, BadEnvironmentExitsTwo) {
    EnvGuard rel("SEPBOUND_REL_TOL", "zero");
    EXPECT_EQ(run({"ccdf", "--loss", "0.4", "--beta", "4", "--classes", "10", "--nu", "1"}).code, 2);
}

TEST(Cli, CcdfInterAboveIntra) {
    const auto r = run({"ccdf", "--loss", "0.1,0.4,0.7,1.0", "--beta", "4", "--classes", "10", "--nu", "0.5:20:0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 4u * 40u);
    for (const auto& row : rows) EXPECT_GE(num(row, "inter_lower"), num(row, "intra"));
}

TEST(Cli, BcSweepNonincreasingInLoss) {
    EnvGuard rel("SEPBOUND_REL_TOL_2D", "1e-4");
    const auto r = run({"bc-sweep", "--beta", "4", "--loss", "0.2,0.6,1.0", "--classes", "10,30"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 6u);
    std::map<int, std::vector<double>> by_class;
    for (const auto& row : rows) by_class[static_cast<int>(num(row, "classes"))].push_back(num(row, "b_c"));
    for (const auto& [c, values] : by_class)
        for (std::size_t i = 1; i < values.size(); ++i) EXPECT_LE(values[i], values[i - 1] + 1e-9) << c;
}

TEST(Cli, BaSweepTable) {
    EnvGuard rel("SEPBOUND_REL_TOL_2D", "1e-4");
    const auto r = run({"ba-sweep", "--loss", "0.4", "--beta", "4", "--classes", "10,20", "--gamma", "1.5,3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = rows_of(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NEAR(num(rows[0], "b_A"), 0.845340377, 1e-5);
    EXPECT_GE(num(rows[0], "b_A"), num(rows[1], "b_A"));
}

TEST(Cli, JsonAndOutputFile) {
    const auto dir = scratch("cli_json");
    const auto path = dir / "t.json";
    const auto r = run({"ccdf", "--loss", "0.4", "--beta", "4", "--classes", "10", "--nu", "1,4", "--format", "json",
                        "--output", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto doc = nlohmann::json::parse(slurp(path));
    EXPECT_EQ(doc["columns"], (nlohmann::json{"loss", "nu", "intra", "inter_lower"}));
    ASSERT_EQ(doc["rows"].size(), 2u);
    EXPECT_NEAR(doc["rows"][0]["intra"].get<double>(), 0.880735279704417, 1e-7);
    EXPECT_NE(doc["provenance"].get<std::string>().find("ccdf"), std::string::npos);
    const auto tsv = run({"ccdf", "--loss", "0.4", "--beta", "4", "--classes", "10", "--nu", "1", "--format", "tsv"});
    EXPECT_NE(tsv.out.find("loss\tnu\tintra\tinter_lower"), std::string::npos);
    EXPECT_EQ(run({"ccdf", "--loss", "0.4", "--beta", "4", "--classes", "10", "--nu", "1", "--output",
                   (dir / "no" / "such" / "f.csv").string()})
                  .code,
              4);
}

TEST(Cli, EmpiricalSubcommands) {
    const auto dir = scratch("cli_empirical");
    // Two blobs 10 apart with unit spread; β = 4 model scores in yhat.
    const auto model = LossModel::from_loss(0.45, 4.0);
    const auto alpha = rng_exponential(5, 0, 4000);
    std::string text = "class,p0,p1,f0,f1\n";
    char buf[200];
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const int c = static_cast<int>(i % 2);
        const double y = std::exp(-std::pow(alpha[i] * model.mu, 4.0));
        const double p0 = c == 0 ? y : 1.0 - y;
        const double p1 = c == 1 ? y : 1.0 - y;
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.6f,%.6f\n", c, p0, p1,
                      std::sin(double(i)) + 10.0 * c, std::cos(double(i)));
        text += buf;
    }
    const auto data = dir / "two_blobs.csv";
    write_text(data, text);

    const auto fit = run({"fit-beta", "--input", data.string(), "--beta-grid", "1,1.4,2,3,4,5"});
    ASSERT_EQ(fit.code, 0) << fit.err;
    EXPECT_EQ(num(rows_of(fit.out)[0], "beta_hat"), 4.0);

    const auto sep = run({"separability", "--input", data.string(), "--seed", "1"});
    ASSERT_EQ(sep.code, 0) << sep.err;
    const auto sep_rows = rows_of(sep.out);
    ASSERT_EQ(sep_rows.size(), 1u);
    EXPECT_EQ(num(sep_rows[0], "p1"), 1.0);
    EXPECT_EQ(num(sep_rows[0], "p2"), 1.0);
    EXPECT_EQ(run({"separability", "--input", data.string(), "--seed", "1"}).out, sep.out);
    EXPECT_EQ(run({"separability", "--input", data.string(), "--pair", "0:1", "--pair", "1:0"}).code, 0);
    EXPECT_EQ(run({"separability", "--input", data.string(), "--pair", "0:0"}).code, 2);
    EXPECT_EQ(run({"separability", "--input", data.string(), "--pair", "0:5"}).code, 2);
    EXPECT_EQ(run({"separability", "--input", data.string(), "--anchors", "1500", "--pool", "1000"}).code, 4);

    const auto acc = run({"accuracy", "--input", data.string()});
    ASSERT_EQ(acc.code, 0) << acc.err;
    for (const auto& row : rows_of(acc.out)) {
        EXPECT_EQ(num(row, "kappa_star"), 1.0);
        EXPECT_EQ(row.at("predicted"), row.at("lower_bound"));
    }

    const auto hist = run({"hist", "--input", data.string(), "--beta", "4", "--bins", "10"});
    ASSERT_EQ(hist.code, 0) << hist.err;
    const auto hist_rows = rows_of(hist.out);
    ASSERT_EQ(hist_rows.size(), 10u);
    double total = 0.0;
    for (const auto& row : hist_rows) total += num(row, "count");
    EXPECT_EQ(total, 4000.0);
    EXPECT_EQ(run({"hist", "--input", data.string(), "--bins", "1"}).code, 2);
}

TEST(Cli, DataErrorsExitFourAndNameTheLine) {
    const auto dir = scratch("cli_bad");
    const auto bad = dir / "bad.csv";
    write_text(bad, "class,f0,f1\n0,1,2\n1,3\n");
    const auto r = run({"fit-beta", "--input", bad.string()});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
    const auto sums = dir / "sums.csv";
    write_text(sums, "class,p0,p1,f0\n0,0.5,0.3,1\n1,0.2,0.8,1\n");
    const auto v = run({"accuracy", "--input", sums.string()});
    EXPECT_EQ(v.code, 4);
    EXPECT_NE(v.err.find("line 2"), std::string::npos) << v.err;
    EXPECT_EQ(run({"fit-beta", "--input", (dir / "missing.csv").string()}).code, 4);
    // No probability columns for the accuracy report.
    const auto nop = dir / "nop.csv";
    write_text(nop, "class,yhat,f0\n0,0.5,1\n1,0.7,2\n");
    EXPECT_EQ(run({"accuracy", "--input", nop.string(), "--beta", "2"}).code, 4);
}

TEST(Cli, SynthIsDeterministicAndLoadable) {
    const auto dir = scratch("cli_synth");
    const auto a = run({"synth", "--variant", "syn1", "--seed", "7", "--out-dir", dir.string(), "--prefix", "a"});
    const auto b = run({"synth", "--variant", "syn1", "--seed", "7", "--out-dir", dir.string(), "--prefix", "b"});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(slurp(dir / "a_train.csv"), slurp(dir / "b_train.csv"));
    EXPECT_EQ(slurp(dir / "a_test.csv"), slurp(dir / "b_test.csv"));
    EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
    const auto train = load_dataset((dir / "a_train.csv").string());
    EXPECT_EQ(train.size(), 16000u);
    EXPECT_EQ(train.dim, 10u);
    EXPECT_EQ(train.num_classes, 20);
    const auto rows = rows_of(a.out);
    ASSERT_EQ(rows.size(), 40u);
    EXPECT_EQ(run({"synth", "--variant", "syn9"}).code, 2);
    EXPECT_EQ(run({"synth", "--variant", "syn2", "--classes", "1", "--out-dir", dir.string()}).code, 2);
}

TEST(Cli, VerifyQuickPassesAndZeroSigmaFails) {
    const auto ok = run({"verify", "--quick"});
    EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
    const auto rows = rows_of(ok.out);
    EXPECT_EQ(rows.size(), 6u * 4u + 8u);
    for (const auto& row : rows) EXPECT_EQ(row.at("pass"), "yes") << row.at("check");
    const auto bad = run({"verify", "--quick", "--sigma", "0"});
    EXPECT_EQ(bad.code, 5);
    EXPECT_NE(bad.err.find("verification failed"), std::string::npos);
    EXPECT_EQ(run({"verify", "--sigma", "-1"}).code, 2);
}

TEST(Cli, HelpDocumentsEverySubcommand) {
    const std::map<std::string, std::vector<std::string>> flags = {
        {"bound", {"--loss", "--beta", "--classes", "--kappa", "--gamma", "--grid-step", "--method", "--refine",
                   "--verify", "--samples", "--seed", "--sigma"}},
        {"ccdf", {"--loss", "--beta", "--classes", "--kappa", "--nu"}},
        {"ba-sweep", {"--loss", "--beta", "--classes", "--kappa-scale", "--gamma"}},
        {"bc-sweep", {"--loss", "--beta", "--classes", "--kappa-scale", "--grid-step", "--method"}},
        {"fit-beta", {"--input", "--classes", "--beta-grid"}},
        {"separability", {"--input", "--pair", "--anchors", "--pool", "--seed"}},
        {"accuracy", {"--input", "--beta", "--beta-grid"}},
        {"hist", {"--input", "--beta", "--beta-grid", "--bins"}},
        {"synth", {"--variant", "--dim", "--classes", "--train", "--test", "--seed", "--out-dir", "--prefix"}},
        {"verify", {"--quick", "--samples", "--seed", "--sigma"}},
    };
    for (const auto& [cmd, expected] : flags) {
        const auto r = run({cmd, "--help"});
        EXPECT_EQ(r.code, 0) << cmd;
        for (const auto& f : expected) EXPECT_NE(r.out.find(f), std::string::npos) << cmd << " " << f;
        for (const auto& f : {"--format", "--output", "--threads"})
            EXPECT_NE(r.out.find(f), std::string::npos) << cmd << " " << f;
    }
    const auto top = run({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const auto& [cmd, unused] : flags) EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
}

TEST(Cli, DeterministicAcrossThreadCounts) {
    const std::vector<std::string> base = {"ccdf", "--loss", "0.3,0.9", "--beta", "2", "--classes", "5", "--nu",
                                           "0.5:3:0.5"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    auto three = base;
    three.insert(three.end(), {"--threads", "3"});
    const auto a = run(one), b = run(three);
    ASSERT_EQ(a.code, 0);
    // Identical tables; only the provenance line echoes the flags.
    EXPECT_EQ(a.out.substr(a.out.find('\n')), b.out.substr(b.out.find('\n')));
}
