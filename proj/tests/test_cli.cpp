#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rxval/fold_plan.hpp"
#include "rxval/rng.hpp"
#include "rxval/splitters.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "rxval_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path out_path = work_dir() / "stdout.txt";
    const fs::path err_path = work_dir() / "stderr.txt";
    const std::string command = std::string(RXVAL_CLI_PATH) + " " + args + " > " +
                                out_path.string() + " 2> " + err_path.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("cli split produces valid plans and stable bytes") {
    const fs::path data = work_dir() / "four.csv";
    write_file(data, "sample_id,label,f0\na,1,0.1\nb,0,0.2\nc,1,0.3\nd,0,0.4\n");

    const auto first = run_cli("split --input " + data.string() + " --scheme rloocv --seed 1");
    REQUIRE(first.exit_code == 0);
    const rxval::FoldPlan plan = rxval::plan_from_json(first.out);
    REQUIRE(plan.folds.size() == 4);
    const std::vector<int> labels = {1, 0, 1, 0};
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(plan.folds[i].excluded_indices.size() == 1);
        CHECK(labels[plan.folds[i].excluded_indices[0]] != labels[i]);
    }

    const auto second = run_cli("split --input " + data.string() + " --scheme rloocv --seed 1");
    CHECK(second.out == first.out);

    const fs::path five = work_dir() / "five.csv";
    write_file(five, "sample_id,label\na,1\nb,0\nc,1\nd,0\ne,1\n");
    const auto failed = run_cli("split --input " + five.string() + " --scheme lpocv --p 3");
    CHECK(failed.exit_code == 2);
    CHECK(failed.err.find("IndivisibleFold") != std::string::npos);

    const auto missing = run_cli("split --input /nonexistent.csv --scheme loocv");
    CHECK(missing.exit_code == 1);
}

TEST_CASE("cli evaluate reports metrics and writes curves") {
    const fs::path preds = work_dir() / "preds.csv";
    write_file(preds, "sample_id,label,score\na,1,1\nb,0,0\nc,1,1\nd,0,0\n");
    const auto perfect = run_cli("evaluate --input " + preds.string());
    REQUIRE(perfect.exit_code == 0);
    const auto json = nlohmann::json::parse(perfect.out);
    CHECK(json["auroc"] == 1.0);
    CHECK(json["n"] == 4);
    CHECK(json["t_pos"] == 2);
    CHECK(json["t_neg"] == 2);

    const fs::path constant = work_dir() / "constant.csv";
    write_file(constant, "sample_id,label,score\na,1,0.5\nb,0,0.5\n");
    const auto tied = run_cli("evaluate --input " + constant.string());
    CHECK(nlohmann::json::parse(tied.out)["auroc"] == 0.5);

    // Mean-predictor pooled predictions at exact balance 0.5.
    std::ostringstream mean_csv;
    mean_csv << "sample_id,label,score\n";
    for (int i = 0; i < 250; ++i) {
        const int label = i < 125 ? 1 : 0;
        mean_csv << "s" << i << ',' << label << ',' << (125 - label) / 249.0 << '\n';
    }
    const fs::path mean_path = work_dir() / "mean.csv";
    write_file(mean_path, mean_csv.str());
    const fs::path roc_path = work_dir() / "roc.csv";
    const fs::path pr_path = work_dir() / "pr.csv";
    const auto mean_run = run_cli("evaluate --input " + mean_path.string() + " --roc-out " +
                                  roc_path.string() + " --pr-out " + pr_path.string());
    REQUIRE(mean_run.exit_code == 0);
    const auto mean_json = nlohmann::json::parse(mean_run.out);
    CHECK(mean_json["auroc"] == 0.0);
    CHECK(std::fabs(mean_json["aupr"].get<double>() - 0.25) < 1e-9);
    CHECK(slurp(roc_path).rfind("threshold,fpr,tpr\n", 0) == 0);
    CHECK(slurp(pr_path).rfind("threshold,recall,precision\n", 0) == 0);

    const fs::path single = work_dir() / "single.csv";
    write_file(single, "sample_id,label,score\na,1,0.5\nb,1,0.2\n");
    CHECK(run_cli("evaluate --input " + single.string()).exit_code == 2);
}

TEST_CASE("cli compare runs DeLong and Fisher") {
    const fs::path a = work_dir() / "cmp_a.csv";
    write_file(a, "sample_id,label,score\na,1,0.9\nb,0,0.4\nc,1,0.6\nd,0,0.3\n");
    const auto self = run_cli("compare --a " + a.string() + " --b " + a.string());
    REQUIRE(self.exit_code == 0);
    auto json = nlohmann::json::parse(self.out);
    CHECK(json["pairs"][0]["p_value"] == 1.0);
    CHECK(json["pairs"][0]["z"] == 0.0);

    const auto fisher = run_cli("compare --a " + a.string() + " --b " + a.string() + " --fisher");
    json = nlohmann::json::parse(fisher.out);
    CHECK(json["fisher"]["p_value"] == json["pairs"][0]["p_value"]);

    const fs::path misaligned = work_dir() / "cmp_b.csv";
    write_file(misaligned, "sample_id,label,score\na,0,0.9\nb,1,0.4\nc,1,0.6\nd,0,0.3\n");
    const auto bad = run_cli("compare --a " + a.string() + " --b " + misaligned.string());
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("MisalignedLabels") != std::string::npos);
}

TEST_CASE("cli simulate presets are byte-deterministic across jobs") {
    const fs::path run1 = work_dir() / "records1.csv";
    const fs::path run2 = work_dir() / "records2.csv";
    const fs::path run3 = work_dir() / "records3.csv";
    const std::string base = "simulate --figure 3bc --replicates 2 --n-min 40 --seed 0 ";
    CHECK(run_cli(base + "--jobs 1 --out " + run1.string()).exit_code == 0);
    CHECK(run_cli(base + "--jobs 4 --out " + run2.string()).exit_code == 0);
    CHECK(run_cli(base + "--jobs 4 --out " + run3.string()).exit_code == 0);
    const std::string bytes = slurp(run1);
    CHECK(bytes == slurp(run2));
    CHECK(bytes == slurp(run3));
    CHECK(bytes.rfind("scheme,p,balance,model,lambda,replicate,seed,n,auroc,aupr\n", 0) == 0);

    // 3bc is RLOOCV-only: 2 models x 9 balances x 2 replicates.
    std::istringstream in(bytes);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("rloocv,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 36);
}

TEST_CASE("cli simulate honors RXVAL_SEED") {
    const fs::path with_flag = work_dir() / "seed_flag.csv";
    const fs::path with_env = work_dir() / "seed_env.csv";
    const std::string grid = "simulate --scheme loocv --model negmean --balances 0.5 "
                             "--replicates 2 --n-min 20 --jobs 1 ";
    CHECK(run_cli(grid + "--seed 99 --out " + with_flag.string()).exit_code == 0);
    ::setenv("RXVAL_SEED", "99", 1);
    CHECK(run_cli(grid + "--out " + with_env.string()).exit_code == 0);
    ::unsetenv("RXVAL_SEED");
    CHECK(slurp(with_flag) == slurp(with_env));
}

TEST_CASE("cli report summarizes records") {
    const fs::path records = work_dir() / "for_report.csv";
    const std::string sim = "simulate --scheme loocv --model negmean --balances 0.5 "
                            "--replicates 3 --n-min 20 --jobs 1 --seed 1 --out " +
                            records.string();
    REQUIRE(run_cli(sim).exit_code == 0);
    const fs::path summary = work_dir() / "summary.csv";
    const auto report = run_cli("report --input " + records.string() + " --out " +
                                summary.string());
    REQUIRE(report.exit_code == 0);
    const std::string csv = slurp(summary);
    CHECK(csv.rfind("scheme,p,balance,model,lambda,mean_auroc,std_auroc,t,p_two_sided,p_less,n_reps\n",
                    0) == 0);
    CHECK(csv.find("loocv,1,0.5,negmean,,1,0,nan,nan,nan,3") != std::string::npos);
    CHECK(report.out.find("loocv") != std::string::npos);
}

TEST_CASE("cli round trip: split output equals the library plan byte for byte") {
    // The CLI adds no randomness of its own: its plan must be the library
    // plan for derive_stream(seed, 0, plan-tag) on the same labels.
    const fs::path data = work_dir() / "roundtrip.csv";
    std::ostringstream csv;
    csv << "sample_id,label,f0,f1\n";
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
        labels.push_back(i % 3 == 0 ? 1 : 0);
        csv << 's' << i << ',' << labels.back() << ",0.5,0.25\n";
    }
    write_file(data, csv.str());
    const auto run = run_cli("split --input " + data.string() +
                             " --scheme rlpocv --p 2 --seed 5");
    REQUIRE(run.exit_code == 0);

    rxval::RngStream rng = rxval::derive_stream(5, 0, rxval::kTagPlan);
    const rxval::FoldPlan expected =
        rxval::build_plan(rxval::SchemeSpec{rxval::SchemeKind::Rlpocv, 2}, labels, rng);
    CHECK(run.out == rxval::plan_to_json(expected) + "\n");

    const rxval::FoldPlan plan = rxval::plan_from_json(run.out);
    CHECK(plan.n == 12);
    CHECK(plan.folds.size() == 6);
}
