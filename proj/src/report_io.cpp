#include "dtlab/report_io.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

namespace dtlab {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

const char* orientation_name(Orientation o) {
    return o == Orientation::zero_first ? "zero_first" : "annulus_first";
}

json trend_json(const TrendCall& t, const std::string& strategy) {
    return json{{"trend", to_string(t.trend)},
                {"inf_estimate", t.inf_estimate},
                {"rule", t.rule},
                {"strategy", strategy}};
}

} // namespace

std::string report_to_json(const HypothesisReport& rep) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["unza_failure_implied"] = rep.unza_failure_implied;
    j["c"] = rep.c;
    j["witness"] = rep.witness;

    json t2;
    t2["applies"] = rep.theorem2.applies;
    t2["reason"] = rep.theorem2.reason;
    if (rep.theorem2.witness)
        t2["witness"] = {rep.theorem2.witness->real(), rep.theorem2.witness->imag()};
    j["theorem2"] = t2;

    j["unza"] = trend_json(rep.unza, rep.unza_strategy);
    j["nza"] = trend_json(rep.nza, rep.nza_strategy);

    j["warnings"] = json::array();
    for (const auto& w : rep.warnings) j["warnings"].push_back({{"kind", w.kind}, {"detail", w.detail}});

    j["trace_counts"] = {{"unza", rep.unza_traces.size()}, {"nza", rep.nza_traces.size()}};
    return j.dump(2);
}

std::string traces_to_csv(const std::vector<CriterionTrace>& traces) {
    std::ostringstream os;
    os << "n,re(a_n),im(a_n),t_n,d_n,m_n_lo,m_n_hi,ratio_unza,ratio_nza,chain_cos\n";
    for (const auto& t : traces) {
        os << t.n << ',' << format_double(t.a_n.real()) << ',' << format_double(t.a_n.imag())
           << ',' << format_double(t.t_n) << ',' << format_double(t.d_n) << ','
           << format_double(t.m_n.lo) << ',' << format_double(t.m_n.hi) << ','
           << format_double(t.ratio_unza_hi) << ',' << format_double(t.ratio_nza) << ','
           << format_double(t.chain_cos) << '\n';
    }
    return os.str();
}

std::string lemma1_rows_to_csv(const Lemma1Report& rep) {
    std::ostringstream os;
    os << "trial,orientation,N,t,c,s_prime,s,dim_zero,dim_annulus,cos_alpha,bound_sharp,"
          "bound_weak,satisfied\n";
    for (const auto& r : rep.rows) {
        os << r.trial << ',' << orientation_name(r.orientation) << ',' << r.N << ','
           << format_double(r.t) << ',' << format_double(r.c) << ',' << format_double(r.s_prime)
           << ',' << format_double(r.s) << ',' << r.dim_zero << ',' << r.dim_annulus << ','
           << format_double(r.cos_alpha) << ',' << format_double(r.bound_sharp) << ','
           << format_double(r.bound_weak) << ',' << (r.satisfied ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string lemma1_trials_to_csv(const Lemma1Report& rep) {
    std::ostringstream os;
    os << "trial_index,N,t,c,s_prime,s,sigma_max_Y,tau_frob_Y,residual_conjugation\n";
    int idx = 0;
    for (const auto& r : rep.rows) {
        os << idx++ << ',' << r.N << ',' << format_double(r.t) << ',' << format_double(r.c) << ','
           << format_double(r.s_prime) << ',' << format_double(r.s) << ','
           << format_double(r.sigma_max_y) << ',' << format_double(r.tau_frob_y) << ','
           << format_double(r.residual_conjugation) << '\n';
    }
    return os.str();
}

std::string lemma1_summary_to_json(const Lemma1Report& rep) {
    const auto& s = rep.summary;
    json j;
    j["trials"] = s.trials;
    j["rows"] = s.rows;
    j["mean_cos_alpha"] = s.mean_cos;
    j["min_cos_alpha"] = s.min_cos;
    j["bound_sharp"] = s.bound_sharp;
    j["bound_weak"] = s.bound_weak;
    j["satisfied_fraction"] = s.satisfied_fraction;
    j["mean_tau_frob_Y"] = s.mean_tau_frob_y;
    j["mean_tau_frob_Z2inv"] = s.mean_tau_frob_z2inv;
    j["max_residual_conjugation"] = s.max_residual_conjugation;
    j["max_y_route_gap"] = s.max_y_route_gap;
    j["slack_mult"] = s.slack_mult;
    j["slack_add"] = s.slack_add;
    j["seed"] = s.seed;
    j["warnings"] = s.warnings;
    return j.dump(2);
}

std::string theorem2_rows_to_csv(const Theorem2Report& rep) {
    std::ostringstream os;
    os << "step,trial,s_n,s_prime_n,mass_Bn,t_tilde,c_eff,dim_zero,dim_annulus,cos_alpha,"
          "bound_weak,satisfied\n";
    for (const auto& r : rep.rows) {
        os << r.step << ',' << r.trial << ',' << format_double(r.s_n) << ','
           << format_double(r.s_prime_n) << ',' << format_double(r.mass_bn) << ','
           << format_double(r.t_tilde) << ',' << format_double(r.c_eff) << ',' << r.dim_zero << ','
           << r.dim_annulus << ',' << format_double(r.cos_alpha) << ','
           << format_double(r.bound_weak) << ',' << (r.satisfied ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string theorem2_summary_to_json(const Theorem2Report& rep) {
    const auto& s = rep.summary;
    json j;
    j["mean_cos_nondecreasing"] = s.mean_cos_nondecreasing;
    j["slack_mult"] = s.slack_mult;
    j["slack_add"] = s.slack_add;
    j["seed"] = s.seed;
    j["warnings"] = s.warnings;
    j["steps"] = json::array();
    for (const auto& st : s.steps) {
        json sj;
        sj["step"] = st.step;
        sj["s_n"] = st.s_n;
        sj["s_prime_n"] = st.s_prime_n;
        sj["skipped"] = st.skipped;
        if (st.skipped) {
            sj["notice"] = st.notice;
        } else {
            sj["mass_Bn"] = st.mass_bn;
            sj["bound_weak"] = st.bound_weak;
            sj["mean_cos_alpha"] = st.mean_cos;
            sj["min_cos_alpha"] = st.min_cos;
        }
        j["steps"].push_back(sj);
    }
    return j.dump(2);
}

std::string example3_table_to_csv(const std::vector<Example3Analysis>& rows) {
    std::ostringstream os;
    os << "n,k_star,min_bound,r_n,s_n,value_at_x1,value_at_rn,log_value_at_sn,"
          "log_value_at_nm1,log_bound_k_eq_n\n";
    for (const auto& a : rows) {
        os << a.n << ',' << a.k_star << ',' << format_double(a.min_bound) << ',';
        if (a.r_n) os << format_double(*a.r_n);
        os << ',';
        if (a.s_n) os << format_double(*a.s_n);
        os << ',' << format_double(a.value_at_x1) << ',';
        if (a.value_at_rn) os << format_double(*a.value_at_rn);
        os << ',';
        if (a.log_value_at_sn) os << format_double(*a.log_value_at_sn);
        os << ',' << format_double(a.log_value_at_nm1) << ','
           << format_double(a.log_bound_k_eq_n) << '\n';
    }
    return os.str();
}

} // namespace dtlab
