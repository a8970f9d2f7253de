#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "specdiag/json_io.hpp"

using namespace specdiag;
namespace fss = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SPECDIAG_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
    int status = pclose(pipe);
    res.exit_code = WEXITSTATUS(status);
    return res;
}

fss::path temp_dir() {
    fss::path dir = fss::temp_directory_path() / "specdiag_cli_test";
    fss::create_directories(dir);
    return dir;
}

std::string write_doc(const std::string& name, const Json& j) {
    fss::path p = temp_dir() / name;
    save_json_file(p.string(), j);
    return p.string();
}

} // namespace

TEST_CASE("version flag") {
    RunResult r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("specdiag/1") != std::string::npos);
}

TEST_CASE("check: weak verdicts and exit codes") {
    std::string d = write_doc("d_weak.json", seqspec_to_json(SequenceSpec::finite({1, 1, 0})));
    std::string s = write_doc("s_weak.json", seqspec_to_json(SequenceSpec::finite({3, 1, 1})));
    RunResult ok = run_cli("check --order weak --d " + d + " --s " + s);
    CHECK(ok.exit_code == 0);
    Json doc = Json::parse(ok.out);
    CHECK(doc["verdict"] == true);

    std::string d2 = write_doc("d_thom.json", seqspec_to_json(SequenceSpec::finite({2, 0})));
    std::string s2 = write_doc("s_thom.json", seqspec_to_json(SequenceSpec::finite({2, 1})));
    RunResult bad = run_cli("check --order thompson --d " + d2 + " --s " + s2);
    CHECK(bad.exit_code == 1);

    RunResult kad = run_cli("check --order kadison --d " +
                            write_doc("d_kad.json",
                                      seqspec_to_json(SequenceSpec::finite({0.5, 0.5, 1.0}))));
    CHECK(kad.exit_code == 0);

    RunResult usage = run_cli("check --order weak --d " + d);
    CHECK(usage.exit_code == 64);
}

TEST_CASE("construct | verify pipe on files") {
    std::string d = write_doc("d_c.json", seqspec_to_json(SequenceSpec::finite({8, 2, 2})));
    std::string s = write_doc("s_c.json", seqspec_to_json(SequenceSpec::finite({10, 5, 3})));
    std::string m = (temp_dir() / "witness.json").string();
    RunResult built =
        run_cli("construct --kind thompson --d " + d + " --s " + s + " --out " + m);
    CHECK(built.exit_code == 0);
    Json envelope = Json::parse(built.out);
    CHECK(envelope["ok"] == true);

    RunResult verified = run_cli("verify --matrix " + m + " --d " + d + " --s " + s);
    CHECK(verified.exit_code == 0);
    Json rep = Json::parse(verified.out);
    CHECK(rep["pass"] == true);

    // Corrupt the witness: residual failure (exit 3).
    Json mat = load_json_file(m);
    mat["entries"][0] = 99.0;
    std::string m2 = write_doc("witness_bad.json", mat);
    RunResult broken = run_cli("verify --matrix " + m2 + " --d " + d + " --s " + s);
    CHECK(broken.exit_code == 3);
}

TEST_CASE("construct: infeasible input exits 1") {
    std::string d = write_doc("d_bad.json", seqspec_to_json(SequenceSpec::finite({2, 0})));
    std::string s = write_doc("s_bad.json", seqspec_to_json(SequenceSpec::finite({2, 1})));
    RunResult r = run_cli("construct --kind thompson --d " + d + " --s " + s);
    CHECK(r.exit_code == 1);
    Json doc = Json::parse(r.out);
    CHECK(doc.contains("error"));
}

TEST_CASE("plan then realize") {
    Json dj = seqspec_to_json(SequenceSpec::with_tail({0.5}, Tail::geometric(0.25, 0.5)));
    Json sj = seqspec_to_json(SequenceSpec::with_tail({1.0}, Tail::geometric(0.5, 0.5)));
    std::string d = write_doc("d_plan.json", dj);
    std::string s = write_doc("s_plan.json", sj);
    std::string p = (temp_dir() / "plan.json").string();
    RunResult planned = run_cli("plan --d " + d + " --s " + s + " --depth 8 --out " + p);
    CHECK(planned.exit_code == 0);
    Json env = Json::parse(planned.out);
    CHECK(env["case"] == "case2_infimum_not_attained");

    RunResult realized = run_cli("realize --plan " + p);
    CHECK(realized.exit_code == 0);
    Json mat = Json::parse(realized.out);
    CHECK(mat["rows"].get<int>() > 0);
}

TEST_CASE("certify exit codes") {
    DenseMatrix psd(2, 2, FieldTag::Real);
    psd(0, 0) = 2.0;
    psd(0, 1) = 1.0;
    psd(1, 0) = 1.0;
    psd(1, 1) = 2.0;
    std::string m = write_doc("psd.json", matrix_to_json(psd));
    CHECK(run_cli("certify --theorem trace --matrix " + m).exit_code == 0);

    DenseMatrix nil(2, 2, FieldTag::Real);
    nil(0, 1) = 1.0;
    std::string m2 = write_doc("nil.json", matrix_to_json(nil));
    CHECK(run_cli("certify --theorem trace --matrix " + m2).exit_code == 2);

    std::string m3 = write_doc("notu.json",
                               matrix_to_json(DenseMatrix::diagonal(std::vector<double>{-2, 1})));
    CHECK(run_cli("certify --theorem tight-unitary --matrix " + m3).exit_code == 3);
}

TEST_CASE("sample writes reproducible draws") {
    std::string s = write_doc("s_sample.json", seqspec_to_json(SequenceSpec::finite({1, 0.5})));
    RunResult one = run_cli("sample --s " + s + " --trials 5 --seed 11");
    RunResult two = run_cli("sample --s " + s + " --trials 5 --seed 11");
    CHECK(one.exit_code == 0);
    CHECK(one.out == two.out);
    Json doc = Json::parse(one.out);
    CHECK(doc["diagonals"].size() == 5);
}
