// specdiag: feasibility checks, witness constructors, planners and
// certifiers for prescribed-diagonal problems. One JSON document on stdout;
// diagnostics on stderr.
//
// Exit codes: 0 success/feasible, 1 infeasible, 2 hypothesis fails,
// 3 residual failure, 4 violation/oracle failure, 64 usage error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specdiag/construct_compact.hpp"
#include "specdiag/construct_finite.hpp"
#include "specdiag/json_io.hpp"
#include "specdiag/majorization.hpp"
#include "specdiag/oracle.hpp"
#include "specdiag/verify.hpp"

namespace {

using namespace specdiag;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitHypothesisFails = 2;
constexpr int kExitResidual = 3;
constexpr int kExitViolation = 4;
constexpr int kExitUsage = 64;

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::Infeasible:
        case Errc::NotMajorized:
        case Errc::NotInteger:
            return kExitInfeasible;
        case Errc::OracleViolation:
            return kExitViolation;
        case Errc::ParseError:
            return kExitUsage;
        default:
            return kExitResidual;
    }
}

void emit(const Json& doc) { std::cout << doc.dump(2) << std::endl; }

std::vector<double> finite_real_values(const SequenceSpec& spec, const char* what) {
    if (!spec.tail.vanishes())
        raise(Errc::UnsupportedTail, std::string(what) + " requires a finite sequence (zero tail)");
    std::vector<double> out;
    out.reserve(spec.head_size());
    for (const Complex& z : spec.head) {
        if (z.imag() != 0.0)
            raise(Errc::ParseError, std::string(what) + " requires real values");
        out.push_back(z.real());
    }
    return out;
}

struct Options {
    std::string order, kind, theorem;
    std::string d_path, s_path, matrix_path, plan_path, out_path;
    double tol = defaults::kVerdictTol;
    double s1 = 0.0;
    std::size_t depth = 16;
    std::size_t blocks = 0;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    bool real_flag = false;
};

int run_check(const Options& opt) {
    SequenceSpec d = seqspec_from_json(load_json_file(opt.d_path));
    if (opt.order == "kadison") {
        KadisonReport rep = kadison_check(d, opt.tol);
        emit(report_to_json(rep));
        return rep.verdict ? kExitOk : kExitInfeasible;
    }
    if (opt.order == "unitary") {
        MajorizationReport rep = unitary_diagonal_check(d, opt.tol);
        emit(report_to_json(rep));
        return rep.verdict ? kExitOk : kExitInfeasible;
    }
    if (opt.s_path.empty()) raise(Errc::ParseError, "--s is required for this order");
    SequenceSpec s = seqspec_from_json(load_json_file(opt.s_path));
    MajorizationReport rep;
    if (opt.order == "weak") rep = weak_majorizes(d, s, opt.depth, opt.tol);
    else if (opt.order == "plain") rep = plain_majorizes(d, s, opt.depth, opt.tol);
    else if (opt.order == "thompson") rep = thompson_majorizes(d, s, opt.tol);
    else if (opt.order == "strong") rep = strong_majorizes(d, s, opt.depth, opt.tol);
    else raise(Errc::ParseError, "unknown order: " + opt.order);
    emit(report_to_json(rep));
    return rep.verdict ? kExitOk : kExitInfeasible;
}

int emit_matrix(const DenseMatrix& m, const Options& opt, Json extra = Json::object()) {
    Json doc = matrix_to_json(m);
    for (auto& [k, v] : extra.items()) doc[k] = v;
    if (!opt.out_path.empty()) {
        save_json_file(opt.out_path, doc);
        Json envelope{{"schema", kSchemaVersion}, {"ok", true},   {"out", opt.out_path},
                      {"rows", m.rows()},         {"cols", m.cols()}};
        emit(envelope);
    } else {
        emit(doc);
    }
    return kExitOk;
}

int run_construct(const Options& opt) {
    SequenceSpec d = seqspec_from_json(load_json_file(opt.d_path));
    if (opt.kind == "thompson") {
        if (opt.s_path.empty()) raise(Errc::ParseError, "--s is required for thompson");
        SequenceSpec s = seqspec_from_json(load_json_file(opt.s_path));
        if (!d.tail.vanishes() || !s.tail.vanishes())
            raise(Errc::UnsupportedTail, "thompson construction requires finite sequences");
        DenseMatrix A = thompson_construct(d.head, finite_real_values(s, "s"), opt.tol);
        return emit_matrix(A, opt);
    }
    if (opt.kind == "schurhorn") {
        if (opt.s_path.empty()) raise(Errc::ParseError, "--s is required for schurhorn");
        SequenceSpec s = seqspec_from_json(load_json_file(opt.s_path));
        DenseMatrix A = schur_horn(finite_real_values(d, "d"), finite_real_values(s, "s"), opt.tol);
        return emit_matrix(A, opt);
    }
    if (opt.kind == "rank1") {
        if (opt.s1 <= 0.0) raise(Errc::ParseError, "--s1 must be positive for rank1");
        DenseMatrix A = rank_one(d, opt.s1, opt.depth, opt.tol);
        return emit_matrix(A, opt);
    }
    if (opt.kind == "projection") {
        DenseMatrix P = projection_from_diagonal(finite_real_values(d, "d"), opt.tol);
        return emit_matrix(P, opt);
    }
    if (opt.kind == "unitary") {
        UnitaryWitness w = unitary_from_diagonal(d, opt.tol);
        Json phases = Json::array();
        for (const Complex& z : w.phases)
            phases.push_back(z.imag() == 0.0 ? Json(z.real())
                                             : Json::array({z.real(), z.imag()}));
        return emit_matrix(w.matrix, opt, Json{{"covered", w.covered}, {"phases", phases}});
    }
    raise(Errc::ParseError, "unknown construction kind: " + opt.kind);
}

int run_plan(const Options& opt) {
    SequenceSpec d = seqspec_from_json(load_json_file(opt.d_path));
    SequenceSpec s = seqspec_from_json(load_json_file(opt.s_path));
    CasePlan tagged = classify_case(d, s, opt.depth, opt.tol);
    CasePlan plan;
    switch (tagged.tag) {
        case CaseTag::Case1_Majorized:
            plan = case1_truncation(d, s, opt.depth, opt.tol);
            break;
        case CaseTag::Case2_InfimumNotAttained: {
            std::size_t J = opt.blocks > 0 ? opt.blocks : std::max<std::size_t>(1, opt.depth / 4);
            plan = case2_partition(d, s, J, opt.tol);
            break;
        }
        default:
            plan = case3_split(d, s, opt.tol);
            break;
    }
    Json doc = plan_to_json(plan);
    if (!opt.out_path.empty()) {
        save_json_file(opt.out_path, doc);
        emit(Json{{"schema", kSchemaVersion},
                  {"ok", true},
                  {"out", opt.out_path},
                  {"case", doc["case"]},
                  {"blocks", plan.blocks.size()}});
    } else {
        emit(doc);
    }
    return kExitOk;
}

int run_realize(const Options& opt) {
    CasePlan plan = plan_from_json(load_json_file(opt.plan_path));
    DenseMatrix A = realize_truncation(plan, opt.tol);
    return emit_matrix(A, opt);
}

int run_verify(const Options& opt) {
    DenseMatrix A = matrix_from_json(load_json_file(opt.matrix_path));
    SequenceSpec d = seqspec_from_json(load_json_file(opt.d_path));
    SequenceSpec s = seqspec_from_json(load_json_file(opt.s_path));
    if (!d.tail.vanishes() || !s.tail.vanishes())
        raise(Errc::UnsupportedTail, "verify requires finite sequences");
    VerificationReport rep =
        verify_construction(A, d.head, finite_real_values(s, "s"), VerifyTolerances{});
    emit(report_to_json(rep));
    return rep.pass ? kExitOk : kExitResidual;
}

int run_certify(const Options& opt) {
    DenseMatrix A = matrix_from_json(load_json_file(opt.matrix_path));
    Certificate cert;
    if (opt.theorem == "trace") cert = certify_trace_equality(A, opt.tol);
    else if (opt.theorem == "tight-strong") cert = certify_tight_strong(A, opt.tol);
    else if (opt.theorem == "tight-unitary") cert = certify_tight_unitary(A, opt.tol);
    else if (opt.theorem == "2x2") cert = check_2x2_lemmas(A, opt.tol);
    else raise(Errc::ParseError, "unknown theorem: " + opt.theorem);
    emit(certificate_to_json(cert));
    switch (cert.verdict) {
        case CertVerdict::HypothesisHoldsConclusionVerified: return kExitOk;
        case CertVerdict::HypothesisFails: return kExitHypothesisFails;
        case CertVerdict::Violation: return kExitViolation;
    }
    return kExitResidual;
}

int run_sample(const Options& opt) {
    SequenceSpec s = seqspec_from_json(load_json_file(opt.s_path));
    OrbitSample sample =
        sample_orbit_diagonals(finite_real_values(s, "s"), opt.trials, opt.seed, opt.real_flag);
    Json doc = sample_to_json(sample);
    if (!opt.out_path.empty()) {
        save_json_file(opt.out_path, doc);
        emit(Json{{"schema", kSchemaVersion},
                  {"ok", true},
                  {"out", opt.out_path},
                  {"trials", sample.diagonals.size()}});
    } else {
        emit(doc);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"specdiag: diagonals vs singular values, feasibility and witnesses"};
    app.set_version_flag("--version", std::string("specdiag 1.0.0 (schema ") + kSchemaVersion + ")");
    app.require_subcommand(1);

    Options opt;

    CLI::App* check = app.add_subcommand("check", "evaluate a feasibility predicate");
    check->add_option("--order", opt.order, "weak|plain|thompson|strong|unitary|kadison")
        ->required();
    check->add_option("--d", opt.d_path)->required();
    check->add_option("--s", opt.s_path);
    check->add_option("--depth", opt.depth);
    check->add_option("--tol", opt.tol);

    CLI::App* construct = app.add_subcommand("construct", "build a witness matrix");
    construct->add_option("--kind", opt.kind, "thompson|schurhorn|rank1|projection|unitary")
        ->required();
    construct->add_option("--d", opt.d_path)->required();
    construct->add_option("--s", opt.s_path);
    construct->add_option("--s1", opt.s1);
    construct->add_option("--depth", opt.depth);
    construct->add_option("--tol", opt.tol);
    construct->add_option("--out", opt.out_path);

    CLI::App* plan = app.add_subcommand("plan", "classify and partition a compact pair");
    plan->add_option("--d", opt.d_path)->required();
    plan->add_option("--s", opt.s_path)->required();
    plan->add_option("--depth", opt.depth);
    plan->add_option("--blocks", opt.blocks);
    plan->add_option("--tol", opt.tol);
    plan->add_option("--out", opt.out_path);

    CLI::App* realize = app.add_subcommand("realize", "realize a plan as a matrix");
    realize->add_option("--plan", opt.plan_path)->required();
    realize->add_option("--tol", opt.tol);
    realize->add_option("--out", opt.out_path);

    CLI::App* verify = app.add_subcommand("verify", "verify a witness against d and s");
    verify->add_option("--matrix", opt.matrix_path)->required();
    verify->add_option("--d", opt.d_path)->required();
    verify->add_option("--s", opt.s_path)->required();

    CLI::App* certify = app.add_subcommand("certify", "run an extremal-case certifier");
    certify->add_option("--theorem", opt.theorem, "trace|tight-strong|tight-unitary|2x2")
        ->required();
    certify->add_option("--matrix", opt.matrix_path)->required();
    certify->add_option("--tol", opt.tol);

    CLI::App* sample = app.add_subcommand("sample", "sample unitary-orbit diagonals");
    sample->add_option("--s", opt.s_path)->required();
    sample->add_option("--trials", opt.trials);
    sample->add_option("--seed", opt.seed);
    sample->add_flag("--real", opt.real_flag);
    sample->add_option("--out", opt.out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed()) return run_check(opt);
        if (construct->parsed()) return run_construct(opt);
        if (plan->parsed()) return run_plan(opt);
        if (realize->parsed()) return run_realize(opt);
        if (verify->parsed()) return run_verify(opt);
        if (certify->parsed()) return run_certify(opt);
        if (sample->parsed()) return run_sample(opt);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        emit(Json{{"schema", kSchemaVersion},
                  {"error", {{"code", errc_name(e.code())}, {"message", e.what()}}}});
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        emit(Json{{"schema", kSchemaVersion},
                  {"error", {{"code", "Internal"}, {"message", e.what()}}}});
        return kExitResidual;
    }
    return kExitUsage;
}
