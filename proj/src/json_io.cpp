#include "specdiag/json_io.hpp"

#include <fstream>

namespace specdiag {

namespace {

Json complex_to_json(const Complex& z) {
    if (z.imag() == 0.0) return Json(z.real());
    return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    raise(Errc::ParseError, "scalar must be a number or an [re, im] pair");
}

const char* tail_name(TailKind k) {
    switch (k) {
        case TailKind::Zero: return "zero";
        case TailKind::Ones: return "ones";
        case TailKind::Geometric: return "geometric";
    }
    return "zero";
}

const char* order_name(Order o) {
    switch (o) {
        case Order::Weak: return "weak";
        case Order::Plain: return "plain";
        case Order::Thompson: return "thompson";
        case Order::Strong: return "strong";
    }
    return "weak";
}

const char* case_name(CaseTag t) {
    switch (t) {
        case CaseTag::Case1_Majorized: return "case1_majorized";
        case CaseTag::Case2_InfimumNotAttained: return "case2_infimum_not_attained";
        case CaseTag::Case3_TailDominated_EventuallyConstant:
            return "case3_eventually_constant";
        case CaseTag::Case3_TailDominated_Split: return "case3_split";
    }
    return "case1_majorized";
}

CaseTag case_from_name(const std::string& s) {
    if (s == "case1_majorized") return CaseTag::Case1_Majorized;
    if (s == "case2_infimum_not_attained") return CaseTag::Case2_InfimumNotAttained;
    if (s == "case3_eventually_constant") return CaseTag::Case3_TailDominated_EventuallyConstant;
    if (s == "case3_split") return CaseTag::Case3_TailDominated_Split;
    raise(Errc::ParseError, "unknown case tag: " + s);
}

const char* kind_name(BlockKind k) {
    switch (k) {
        case BlockKind::Thompson: return "thompson";
        case BlockKind::SchurHorn: return "schurhorn";
        case BlockKind::Diagonal: return "diagonal";
    }
    return "thompson";
}

BlockKind kind_from_name(const std::string& s) {
    if (s == "thompson") return BlockKind::Thompson;
    if (s == "schurhorn") return BlockKind::SchurHorn;
    if (s == "diagonal") return BlockKind::Diagonal;
    raise(Errc::ParseError, "unknown block kind: " + s);
}

const char* verdict_name(CertVerdict v) {
    switch (v) {
        case CertVerdict::HypothesisFails: return "hypothesis_fails";
        case CertVerdict::HypothesisHoldsConclusionVerified: return "verified";
        case CertVerdict::Violation: return "violation";
    }
    return "hypothesis_fails";
}

const char* theorem_name(TheoremTag t) {
    switch (t) {
        case TheoremTag::TraceEquality_ThmPositive: return "trace_equality";
        case TheoremTag::TightStrong_UPositive: return "tight_strong";
        case TheoremTag::TightUnitary_Selfadjoint: return "tight_unitary";
        case TheoremTag::TwoByTwoTrace: return "2x2_trace";
        case TheoremTag::TwoByTwoSelfadjoint: return "2x2_selfadjoint";
    }
    return "trace_equality";
}

} // namespace

Json seqspec_to_json(const SequenceSpec& x) {
    Json head = Json::array();
    for (const Complex& z : x.head) head.push_back(complex_to_json(z));
    Json tail{{"kind", tail_name(x.tail.kind)}};
    if (x.tail.kind == TailKind::Geometric) {
        tail["c"] = x.tail.c;
        tail["r"] = x.tail.r;
    }
    return Json{{"schema", kSchemaVersion}, {"head", head}, {"tail", tail}};
}

SequenceSpec seqspec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("head") || !j["head"].is_array())
        raise(Errc::ParseError, "sequence document needs a head array");
    SequenceSpec out;
    for (const Json& e : j["head"]) out.head.push_back(complex_from_json(e));
    if (j.contains("tail")) {
        const Json& t = j["tail"];
        std::string kind = t.value("kind", "zero");
        if (kind == "zero") out.tail = Tail::zero();
        else if (kind == "ones") out.tail = Tail::ones();
        else if (kind == "geometric")
            out.tail = Tail::geometric(t.value("c", 0.0), t.value("r", 0.5));
        else raise(Errc::ParseError, "unknown tail kind: " + kind);
    }
    return out;
}

Json matrix_to_json(const DenseMatrix& m) {
    Json entries = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            entries.push_back(m.is_real() ? Json(m(i, j).real()) : complex_to_json(m(i, j)));
    return Json{{"schema", kSchemaVersion},
                {"rows", m.rows()},
                {"cols", m.cols()},
                {"field", m.is_real() ? "real" : "complex"},
                {"entries", entries}};
}

DenseMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        raise(Errc::ParseError, "matrix document needs rows, cols and entries");
    std::size_t rows = j["rows"].get<std::size_t>();
    std::size_t cols = j["cols"].get<std::size_t>();
    const Json& entries = j["entries"];
    if (!entries.is_array() || entries.size() != rows * cols)
        raise(Errc::ParseError, "matrix entries do not match rows*cols");
    DenseMatrix m(rows, cols, FieldTag::Complex);
    for (std::size_t k = 0; k < rows * cols; ++k)
        m.entries()[k] = complex_from_json(entries[k]);
    m.normalize_field();
    return m;
}

Json report_to_json(const MajorizationReport& r) {
    Json out{{"schema", kSchemaVersion},
             {"order", order_name(r.order)},
             {"verdict", r.verdict},
             {"gaps", r.gaps},
             {"binding_k", r.binding_k}};
    if (r.final_gap) out["final_gap"] = *r.final_gap;
    return out;
}

Json report_to_json(const KadisonReport& r) {
    Json out{{"schema", kSchemaVersion},
             {"a", r.a},
             {"b", r.b},
             {"finite", r.finite},
             {"verdict", r.verdict}};
    if (r.integer_gap) out["integer_gap"] = *r.integer_gap;
    return out;
}

Json report_to_json(const VerificationReport& r) {
    return Json{{"schema", kSchemaVersion},
                {"diag_residual", r.diag_residual},
                {"sv_residual", r.sv_residual},
                {"aux_residuals", r.aux_residuals},
                {"pass", r.pass}};
}

Json certificate_to_json(const Certificate& c) {
    Json out{{"schema", kSchemaVersion},
             {"theorem", theorem_name(c.theorem_tag)},
             {"hypothesis_gap", c.hypothesis_gap},
             {"conclusion_residual", c.conclusion_residual},
             {"verdict", verdict_name(c.verdict)}};
    if (c.extracted) {
        if (std::holds_alternative<Complex>(*c.extracted)) {
            out["extracted"] = {{"kind", "scalar"},
                                {"value", complex_to_json(std::get<Complex>(*c.extracted))}};
        } else {
            const DenseMatrix& u = std::get<DenseMatrix>(*c.extracted);
            Json diag = Json::array();
            for (const Complex& z : u.diagonal_entries()) diag.push_back(complex_to_json(z));
            out["extracted"] = {{"kind", "diagonal_unitary"}, {"diagonal", diag}};
        }
    }
    return out;
}

Json plan_to_json(const CasePlan& p) {
    Json blocks = Json::array();
    for (const BlockDescriptor& b : p.blocks) {
        blocks.push_back(Json{{"kind", kind_name(b.kind)},
                              {"d_part", b.d_part},
                              {"s_part", b.s_part},
                              {"d_indices", b.d_indices},
                              {"s_indices", b.s_indices}});
    }
    Json splices = Json::array();
    for (const SplicePoint& sp : p.splice_points) {
        splices.push_back(Json{{"host_block", sp.host_block},
                               {"slot", sp.slot},
                               {"tail_block", sp.tail_block},
                               {"merge_block", sp.merge_block}});
    }
    return Json{{"schema", kSchemaVersion},
                {"case", case_name(p.tag)},
                {"blocks", blocks},
                {"splice_points", splices}};
}

CasePlan plan_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("case") || !j.contains("blocks"))
        raise(Errc::ParseError, "plan document needs case and blocks");
    CasePlan p;
    p.tag = case_from_name(j["case"].get<std::string>());
    for (const Json& jb : j["blocks"]) {
        BlockDescriptor b;
        b.kind = kind_from_name(jb.value("kind", "thompson"));
        b.d_part = jb.value("d_part", std::vector<double>{});
        b.s_part = jb.value("s_part", std::vector<double>{});
        b.d_indices = jb.value("d_indices", std::vector<std::size_t>{});
        b.s_indices = jb.value("s_indices", std::vector<std::size_t>{});
        p.blocks.push_back(std::move(b));
    }
    if (j.contains("splice_points")) {
        for (const Json& js : j["splice_points"]) {
            SplicePoint sp;
            sp.host_block = js.value("host_block", std::size_t{0});
            sp.slot = js.value("slot", std::size_t{0});
            sp.tail_block = js.value("tail_block", std::size_t{0});
            sp.merge_block = js.value("merge_block", std::size_t{0});
            p.splice_points.push_back(sp);
        }
    }
    return p;
}

Json sample_to_json(const OrbitSample& s) {
    Json diags = Json::array();
    for (const auto& d : s.diagonals) {
        Json row = Json::array();
        for (const Complex& z : d) row.push_back(complex_to_json(z));
        diags.push_back(std::move(row));
    }
    return Json{{"schema", kSchemaVersion},
                {"seed", s.seed},
                {"s", s.s},
                {"diagonals", diags}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        raise(Errc::ParseError, path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) raise(Errc::ParseError, "cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace specdiag
