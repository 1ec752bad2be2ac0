// Drives the installed command line binary end to end through popen. The
// binary path is injected at compile time.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BINARY) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr) << cmd;
    RunResult r;
    if (!pipe) return r;
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    EXPECT_TRUE(in.good()) << path;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// one shared workspace: corpus synthesis and training are done once, the
// cheaper subcommands reuse the artifacts
class CliWorkflow : public ::testing::Test {
  protected:
    static fs::path dir() {
        static const fs::path d = fs::temp_directory_path() / "lstmlrp_cli_test";
        return d;
    }
    static std::string train_tsv() { return (dir() / "train.tsv").string(); }
    static std::string test_tsv() { return (dir() / "test.tsv").string(); }
    static std::string weights() { return (dir() / "model.bin").string(); }

    static void SetUpTestSuite() {
        fs::create_directories(dir());
        RunResult synth = run_cli("synth --train-out " + train_tsv() + " --test-out " +
                                  test_tsv() +
                                  " --train-size 120 --test-size 40 --min-len 8 --max-len 14"
                                  " --seed 5");
        ASSERT_EQ(synth.exit_code, 0) << synth.output;

        RunResult train = run_cli("train --train " + train_tsv() + " --test " + test_tsv() +
                                  " --out " + weights() +
                                  " --embed-dim 6 --hidden-dim 6 --epochs 2 --seed 3");
        ASSERT_EQ(train.exit_code, 0) << train.output;
        ASSERT_TRUE(fs::exists(weights()));
    }
};

TEST_F(CliWorkflow, TrainEmitsOneLogRowPerEpochPlusTheInitialRow) {
    const std::string out2 = (dir() / "model_log.bin").string();
    const std::string log_path = (dir() / "train.log").string();
    RunResult r = run_cli("train --train " + train_tsv() + " --test " + test_tsv() + " --out " +
                          out2 + " --log " + log_path +
                          " --embed-dim 4 --hidden-dim 4 --epochs 3 --seed 2");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const std::vector<std::string> rows = lines_of(slurp(log_path));
    ASSERT_EQ(rows.size(), 4u);  // epochs 0..3
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto cols = fields_of(rows[i]);
        ASSERT_EQ(cols.size(), 4u) << rows[i];
        EXPECT_EQ(cols[0], std::to_string(i));
    }
}

TEST_F(CliWorkflow, TrainingIsDeterministicAtTheFileLevel) {
    const std::string w1 = (dir() / "det1.bin").string();
    const std::string w2 = (dir() / "det2.bin").string();
    ASSERT_EQ(run_cli("train --train " + train_tsv() + " --out " + w1 +
                      " --embed-dim 4 --hidden-dim 4 --epochs 1 --seed 9")
                  .exit_code,
              0);
    ASSERT_EQ(run_cli("train --train " + train_tsv() + " --out " + w2 +
                      " --embed-dim 4 --hidden-dim 4 --epochs 1 --seed 9")
                  .exit_code,
              0);
    EXPECT_EQ(slurp(w1), slurp(w2));
}

TEST_F(CliWorkflow, PredictListsEverySentenceAndReportsAccuracy) {
    RunResult r = run_cli("predict --weights " + weights() + " --input " + test_tsv());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const auto rows = lines_of(r.output);
    ASSERT_EQ(rows.size(), 41u);  // 40 sentences + accuracy footer
    const auto first = fields_of(rows[0]);
    ASSERT_EQ(first.size(), 8u);  // index, class, name, five scores
    EXPECT_EQ(first[0], "0");
    EXPECT_NE(rows.back().find("# accuracy "), std::string::npos);
}

TEST_F(CliWorkflow, PredictOnRawTextHasNoAccuracyFooter) {
    const fs::path raw = dir() / "raw.txt";
    std::ofstream(raw) << "the movie was EXCELLENT\n\nutterly dreadful plot\n";
    RunResult r = run_cli("predict --weights " + weights() + " --input " + raw.string() +
                          " --format text");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const auto rows = lines_of(r.output);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(r.output.find("# accuracy"), std::string::npos);
}

TEST_F(CliWorkflow, ExplainPrintsRelevancePerTokenAndWritesTheHeatmap) {
    const fs::path html = dir() / "heat.html";
    RunResult r = run_cli("explain --weights " + weights() + " --input " + test_tsv() +
                          " --method lrp --target true --limit 10 --heatmap " + html.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("# method=lrp"), std::string::npos);

    int sentence_headers = 0, token_rows = 0;
    for (const std::string& line : lines_of(r.output)) {
        if (line.rfind("# sentence ", 0) == 0) {
            ++sentence_headers;
            EXPECT_NE(line.find("sum_relevance="), std::string::npos);
        } else if (!line.empty() && line[0] != '#') {
            const auto cols = fields_of(line);
            ASSERT_EQ(cols.size(), 5u) << line;  // t, token, total, left, right
            ++token_rows;
        }
    }
    EXPECT_EQ(sentence_headers, 10);
    EXPECT_GE(token_rows, 10 * 8);

    const std::string page = slurp(html);
    EXPECT_NE(page.find("rgba("), std::string::npos);
    // the first ten fixture sentences cover every class
    EXPECT_NE(page.find("very positive"), std::string::npos);
    EXPECT_NE(page.find("very negative"), std::string::npos);
    EXPECT_NE(page.find("neutral"), std::string::npos);
}

TEST_F(CliWorkflow, ExplainSupportsSaOnRawText) {
    const fs::path raw = dir() / "raw_sa.txt";
    std::ofstream(raw) << "a truly wonderful ending\n";
    RunResult r = run_cli("explain --weights " + weights() + " --input " + raw.string() +
                          " --format text --method sa --target pred");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("# method=sa"), std::string::npos);
}

TEST_F(CliWorkflow, DeletionCurveHasOneRowPerDeletionCount) {
    RunResult r = run_cli("eval-deletion --weights " + weights() + " --corpus " + test_tsv() +
                          " --order decreasing --subset correct --min-len 8 --max-del 3");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const auto rows = lines_of(r.output);
    ASSERT_EQ(rows.size(), 6u);  // header, column names, k = 0..3
    EXPECT_EQ(rows[1], "k\taccuracy\tstddev");
    for (int k = 0; k <= 3; ++k) {
        const auto cols = fields_of(rows[2 + k]);
        ASSERT_EQ(cols.size(), 3u);
        EXPECT_EQ(cols[0], std::to_string(k));
        EXPECT_EQ(cols[2], "-");  // stddev applies to the random baseline only
    }
}

TEST_F(CliWorkflow, RandomDeletionBaselineIsSeededAndRepeatable) {
    const std::string args = "eval-deletion --weights " + weights() + " --corpus " + test_tsv() +
                             " --order random --subset correct --min-len 8 --max-del 3"
                             " --runs 3 --seed 11";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    ASSERT_EQ(a.exit_code, 0) << a.output;
    EXPECT_EQ(a.output, b.output);
    const auto rows = lines_of(a.output);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_NE(fields_of(rows[2])[2], "-");  // numeric stddev column
}

TEST_F(CliWorkflow, DistributionRowsSumToOne) {
    RunResult r = run_cli("eval-distribution --weights " + weights() + " --corpus " + test_tsv() +
                          " --method lrp --target 4 --min-len 10");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const auto rows = lines_of(r.output);
    ASSERT_EQ(rows.size(), 4u);
    for (int row = 1; row <= 3; ++row) {
        const auto cols = fields_of(rows[row]);
        ASSERT_EQ(cols.size(), 11u) << rows[row];
        double sum = 0.0;
        for (size_t i = 1; i < cols.size(); ++i) sum += std::stod(cols[i]);
        EXPECT_NEAR(sum, 1.0, 1e-4) << rows[row];  // printed at six decimals
    }
}

TEST_F(CliWorkflow, TopWordsListsBothEnds) {
    RunResult r = run_cli("top-words --weights " + weights() + " --corpus " + test_tsv() +
                          " --target 4 --n 5");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    int most = 0, least = 0;
    for (const std::string& line : lines_of(r.output)) {
        if (line.rfind("most\t", 0) == 0) ++most;
        if (line.rfind("least\t", 0) == 0) ++least;
    }
    EXPECT_EQ(most, 5);
    EXPECT_EQ(least, 5);
}

TEST_F(CliWorkflow, OptionsCanComeFromAnIniFile) {
    const fs::path ini = dir() / "train.ini";
    std::ofstream(ini) << "[train]\nepochs=1\nembed-dim=4\nhidden-dim=4\nseed=9\n";
    const std::string w_ini = (dir() / "ini_model.bin").string();
    const std::string w_ref = (dir() / "ini_ref.bin").string();
    RunResult r = run_cli("--config " + ini.string() + " train --train " + train_tsv() +
                          " --out " + w_ini);
    ASSERT_EQ(r.exit_code, 0) << r.output;
    ASSERT_EQ(run_cli("train --train " + train_tsv() + " --out " + w_ref +
                      " --epochs 1 --embed-dim 4 --hidden-dim 4 --seed 9")
                  .exit_code,
              0);
    EXPECT_EQ(slurp(w_ini), slurp(w_ref));
}

TEST_F(CliWorkflow, FailuresExitNonzeroWithAnErrorLine) {
    RunResult missing = run_cli("predict --weights " + (dir() / "nope.bin").string() +
                                " --input " + test_tsv());
    EXPECT_EQ(missing.exit_code, 1);
    EXPECT_NE(missing.output.find("error:"), std::string::npos);

    RunResult bad_target = run_cli("explain --weights " + weights() + " --input " + test_tsv() +
                                   " --target 99");
    EXPECT_EQ(bad_target.exit_code, 1);
    EXPECT_NE(bad_target.output.find("error:"), std::string::npos);

    RunResult bad_method = run_cli("top-words --weights " + weights() + " --corpus " +
                                   test_tsv() + " --method gradcam");
    EXPECT_EQ(bad_method.exit_code, 1);

    RunResult no_sub = run_cli("");
    EXPECT_NE(no_sub.exit_code, 0);

    RunResult missing_required = run_cli("train --train " + train_tsv());
    EXPECT_NE(missing_required.exit_code, 0);
}

}  // namespace
