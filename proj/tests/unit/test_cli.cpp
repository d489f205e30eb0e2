#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "summakit/cli/commands.hpp"

using namespace summakit;
using namespace summakit::cli;
namespace fs = std::filesystem;

namespace {

const fs::path config_dir{SUMMAKIT_CONFIG_DIR};

Logger quiet() { return Logger(LogLevel::quiet); }

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "summakit_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig config_from(const std::string& text) { return parse_config(json::parse(text)); }

} // namespace

TEST(Config, ValidationNamesField) {
    try {
        (void)load_config(config_dir / "bad_exponent.json");
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_EQ(e.field(), "k");
    }
    try {
        (void)config_from(R"({"matrix_a": {"type": "cesaro"}, "k": 1, "N": 1})");
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_EQ(e.field(), "N");
    }
    EXPECT_THROW((void)config_from(R"({"k": 1, "N": 4})"), config_error);
    EXPECT_THROW((void)config_from(R"({"matrix_a": {"type": "nope"}, "k": 1, "N": 4})"), config_error);
    EXPECT_THROW((void)config_from(R"({"matrix_a": {"type": "cesaro"}, "k": 1, "N": 4, "output": {"format": "xml"}})"),
                 config_error);
    EXPECT_THROW((void)config_from(R"({"matrix_a": {"type": "cesaro"}, "k": 1, "N": 4, "conditions": ["C42"]})"),
                 config_error);
    EXPECT_THROW((void)load_config(config_dir / "does_not_exist.json"), config_error);
}

TEST(Config, DefaultsAndEcho) {
    auto cfg = load_config(config_dir / "cesaro_verify.json");
    EXPECT_EQ(cfg.N, 16u);
    EXPECT_EQ(cfg.tail.cutoff, 256u);
    EXPECT_EQ(cfg.seed, 7u);
    EXPECT_EQ(cfg.source.at("N"), 16);
    EXPECT_EQ(cfg.matrix_b.type, "cesaro");
}

TEST(Config, ZeroDiagonalSurfaces) {
    auto cfg = load_config(config_dir / "zero_diagonal.json");
    EXPECT_THROW((void)materialize(cfg), zero_diagonal);
    std::ostringstream err;
    Logger log(LogLevel::error, err);
    EXPECT_EQ(cmd_check(cfg, {}, log), exit_config);
    EXPECT_NE(err.str().find("ZeroDiagonal"), std::string::npos);
}

TEST(Check, ExitCodes) {
    std::ostringstream sink;
    auto short_cfg = load_config(config_dir / "explicit_short.json");
    EXPECT_EQ(cmd_check(short_cfg, {}, quiet(), sink), exit_tail);
    short_cfg.tail.allow_cap = true;
    EXPECT_EQ(cmd_check(short_cfg, {}, quiet(), sink), exit_ok);
    RunOptions bad_tail;
    bad_tail.tail_cutoff = 2;
    EXPECT_EQ(cmd_check(short_cfg, bad_tail, quiet(), sink), exit_config);
}

TEST(Check, CapFlagsEveryTailRow) {
    auto cfg = load_config(config_dir / "explicit_short.json");
    cfg.tail.allow_cap = true;
    cfg.conditions = {ConditionId::C10, ConditionId::C11};
    for (const auto& r : evaluate_conditions(cfg, Reading::consistent)) {
        EXPECT_TRUE(r.tail_capped);
        for (bool w : r.tail_warnings) EXPECT_TRUE(w);
    }
}

TEST(Check, CsvSchemaAndDigits) {
    auto cfg = config_from(R"({"matrix_a": {"type": "cesaro"}, "k": 1, "N": 12, "conditions": ["C10", "C15"]})");
    std::ostringstream out;
    ASSERT_EQ(cmd_check(cfg, {}, quiet(), out), exit_ok);
    const auto rows = parse_csv(out.str());
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows[0], (std::vector<std::string>{"condition_id", "v_or_n", "ratio", "running_sup", "trend",
                                                 "tail_cutoff", "tail_warning"}));
    // 12 C10 rows (v = 0..11) and 12 C15 rows
    EXPECT_EQ(rows.size(), 25u);
    EXPECT_EQ(rows[1][0], "C10");
    EXPECT_EQ(rows[1][5], "192");
    EXPECT_EQ(rows[13][0], "C15");
    EXPECT_EQ(rows[13][5], "0");
    // the 17-digit text reloads to the exact double
    const auto reps = evaluate_conditions(cfg, Reading::consistent);
    for (std::size_t i = 0; i < reps[0].size(); ++i) EXPECT_EQ(std::strtod(rows[1 + i][2].c_str(), nullptr), reps[0].ratios[i]);
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Check, PerConditionFilesAndJson) {
    auto dir = scratch("per_condition");
    auto cfg = config_from(R"({"matrix_a": {"type": "cesaro"}, "k": 2, "N": 10})");
    RunOptions opts;
    opts.out = dir.string();
    opts.format = OutputFormat::json;
    ASSERT_EQ(cmd_check(cfg, opts, quiet()), exit_ok);
    for (const char* id : {"C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16", "TA_a", "TA_b", "TA_c", "L1LK"}) {
        const auto file = dir / (std::string(id) + ".json");
        ASSERT_TRUE(fs::exists(file)) << id;
        const auto doc = json::parse(slurp(file));
        EXPECT_EQ(doc.at("metadata").at("condition_id"), id);
        EXPECT_EQ(doc.at("metadata").at("config").at("k"), 2);
        EXPECT_TRUE(doc.at("metadata").contains("tolerances"));
        EXPECT_EQ(doc.at("metadata").at("versions").at("summakit"), version);
        EXPECT_EQ(doc.at("columns").size(), 7u);
        for (const auto& row : doc.at("rows")) EXPECT_EQ(row.at("condition_id"), id);
    }
}

TEST(Check, DeterministicAcrossRuns) {
    auto cfg = config_from(R"({"matrix_a": {"type": "riesz", "weights": {"kind": "power", "alpha": 0.7}},
                               "matrix_b": {"type": "cesaro"}, "lambda": {"type": "power", "c": 2, "alpha": -0.5},
                               "k": 1.5, "N": 30})");
    for (auto fmt : {OutputFormat::csv, OutputFormat::json}) {
        RunOptions opts;
        opts.format = fmt;
        std::ostringstream a, b;
        ASSERT_EQ(cmd_check(cfg, opts, quiet(), a), exit_ok);
        ASSERT_EQ(cmd_check(cfg, opts, quiet(), b), exit_ok);
        EXPECT_EQ(a.str(), b.str());
    }
}

TEST(Check, ExplicitMatricesRoundTrip) {
    const std::size_t N = 20, cutoff = 320;
    const std::string list = R"(["C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16", "L1LK"])";
    auto riesz_cfg = config_from(R"({"matrix_a": {"type": "riesz", "weights": {"kind": "geometric", "ratio": 1.1}},
                                     "matrix_b": {"type": "cesaro"}, "lambda": {"type": "power", "c": 1, "alpha": -0.3},
                                     "k": 2, "N": 20, "conditions": )" + list + "}");
    auto dir = scratch("round_trip");
    const auto b_file = dir / "b.json";
    {
        std::ofstream out(b_file);
        out << matrix_to_json(MatrixFamily::cesaro().materialize(cutoff)).dump();
    }
    json doc = riesz_cfg.source;
    doc["matrix_a"] = matrix_to_json(matrix_family(riesz_cfg.matrix_a).materialize(N));
    doc["matrix_b"] = json{{"type", "explicit"}, {"file", "b.json"}};
    const auto cfg_file = dir / "explicit.json";
    {
        std::ofstream out(cfg_file);
        out << doc.dump(1);
    }
    auto explicit_cfg = load_config(cfg_file);

    RunOptions a, b;
    a.out = (dir / "family").string();
    b.out = (dir / "explicit").string();
    ASSERT_EQ(cmd_check(riesz_cfg, a, quiet()), exit_ok);
    ASSERT_EQ(cmd_check(explicit_cfg, b, quiet()), exit_ok);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "family")) {
        const auto other = dir / "explicit" / entry.path().filename();
        ASSERT_TRUE(fs::exists(other));
        EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path().filename();
        ++compared;
    }
    EXPECT_EQ(compared, 9u);
}

TEST(Check, CesaroSanityAndLinearFactors) {
    auto cfg = load_config(config_dir / "cesaro_check.json");
    cfg.conditions = {ConditionId::C9,  ConditionId::C10, ConditionId::C11, ConditionId::C12,
                      ConditionId::C13, ConditionId::C14, ConditionId::C15, ConditionId::C16};
    for (const auto& r : evaluate_conditions(cfg, Reading::consistent))
        EXPECT_EQ(r.trend, Trend::bounded_looking) << to_string(r.id);
    auto linear = load_config(config_dir / "cesaro_linear.json");
    const auto reps = evaluate_conditions(linear, Reading::consistent);
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_EQ(reps[0].trend, Trend::growing);
}

TEST(Check, RieszCriteriaNeedRieszMatrices) {
    auto cfg = config_from(R"({"matrix_a": {"type": "identity"}, "k": 1, "N": 5, "conditions": ["TA_a"]})");
    EXPECT_EQ(cmd_check(cfg, {}, quiet()), exit_config);
}

TEST(Transform, IdentityRunningTotal) {
    auto cfg = load_config(config_dir / "identity_transform.json");
    const auto t = transform_table(cfg);
    ASSERT_EQ(t.rows.size(), 11u);
    double running = 0.0;
    for (std::size_t n = 0; n <= 10; ++n) {
        const double a = (n % 2 == 0 ? 1.0 : -1.0) / (n + 1.0);
        EXPECT_EQ(std::get<double>(t.rows[n][1]), a);
        EXPECT_EQ(std::get<double>(t.rows[n][4]), a);
        if (n > 0) running += std::fabs(a);
        EXPECT_NEAR(std::get<double>(t.rows[n][6]), running, 1e-15);
    }
}

TEST(Transform, CesaroMatchesLibraryBitForBit) {
    auto cfg = config_from(R"({"matrix_a": {"type": "cesaro"}, "series": {"type": "alternating", "beta": 1},
                               "k": 2, "N": 40})");
    std::ostringstream out;
    ASSERT_EQ(cmd_transform(cfg, {}, quiet(), out), exit_ok);
    const auto rows = parse_csv(out.str());
    ASSERT_EQ(rows.size(), 42u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "a_n", "s_n", "A_n", "delta", "t_n", "running_total"}));
    const auto A = MatrixFamily::cesaro().materialize(40);
    const auto s = alternating_series(40, 1.0);
    const auto tr = transform_partial_sums(A, s);
    const auto prof = abs_k_profile(A, s, 2.0);
    for (std::size_t n = 0; n <= 40; ++n) {
        const auto& r = rows[n + 1];
        EXPECT_EQ(std::strtod(r[3].c_str(), nullptr), tr[n]);
        EXPECT_EQ(std::strtod(r[4].c_str(), nullptr), prof.delta[n]);
        if (n > 0) {
            EXPECT_EQ(std::strtod(r[5].c_str(), nullptr), prof.term(n));
            EXPECT_EQ(std::strtod(r[6].c_str(), nullptr), prof.running_total[n - 1]);
        }
    }
}

TEST(Transform, Errors) {
    EXPECT_THROW((void)load_config(config_dir / "empty_series.json"), config_error);
    auto no_series = config_from(R"({"matrix_a": {"type": "cesaro"}, "k": 1, "N": 5})");
    EXPECT_EQ(cmd_transform(no_series, {}, quiet()), exit_config);
    auto short_series = config_from(R"({"matrix_a": {"type": "cesaro"}, "k": 1, "N": 5,
                                        "series": {"type": "explicit", "values": [1, 2]}})");
    EXPECT_EQ(cmd_transform(short_series, {}, quiet()), exit_config);
}

TEST(Verify, CesaroWithinTolerance) {
    auto cfg = load_config(config_dir / "cesaro_verify.json");
    const auto res = run_verify(cfg, Reading::consistent, quiet());
    EXPECT_TRUE(res.all_pass);
    for (const auto& row : res.table.rows) {
        const auto& name = std::get<std::string>(row[0]);
        if (name == "cnv_bound" || name == "dnr_bound" || name == "norm_constant_M" || name == "norm_inequality" ||
            name == "t2_inequality")
            continue;
        EXPECT_LE(std::get<double>(row[2]), 1e-11) << name;
    }
    std::ostringstream sink;
    EXPECT_EQ(cmd_verify(cfg, {}, quiet(), sink), exit_ok);
}

TEST(Verify, AdversarialRetainsBoundary) {
    auto cfg = load_config(config_dir / "adversarial_verify.json");
    std::ostringstream log_text;
    Logger log(LogLevel::info, log_text);
    const auto res = run_verify(cfg, Reading::consistent, log);
    EXPECT_TRUE(res.all_pass);
    EXPECT_NE(log_text.str().find("boundary term retained"), std::string::npos);
}

TEST(Verify, StrictModeLogsDifferences) {
    auto cfg = load_config(config_dir / "cesaro_verify.json");
    std::ostringstream log_text;
    Logger log(LogLevel::info, log_text);
    const auto res = run_verify(cfg, Reading::literal, log);
    EXPECT_TRUE(res.all_pass);
    EXPECT_NE(log_text.str().find("strict mode"), std::string::npos);
}

TEST(Verify, FailingToleranceReported) {
    auto cfg = load_config(config_dir / "adversarial_verify.json");
    VerifyTolerances tight;
    tight.inverse = -1.0;
    EXPECT_FALSE(run_verify(cfg, Reading::consistent, quiet(), tight).all_pass);
}

TEST(Logger, Levels) {
    EXPECT_EQ(parse_log_level("debug"), LogLevel::debug);
    EXPECT_EQ(parse_log_level("0"), LogLevel::quiet);
    EXPECT_EQ(parse_log_level("bogus", LogLevel::info), LogLevel::info);
    std::ostringstream sink;
    Logger log(LogLevel::warn, sink);
    log.info("hidden");
    log.warn("shown");
    EXPECT_EQ(sink.str(), "summakit: warn: shown\n");
}
