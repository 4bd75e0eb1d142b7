#pragma once

#include <string>
#include <vector>

#include "dtlab/hypothesis.hpp"
#include "dtlab/subspaces.hpp"

namespace dtlab {

/// Shortest round-trip decimal form; CSV written with this is bit-stable
/// across runs on one platform.
std::string format_double(double v);

std::string report_to_json(const HypothesisReport& rep);

/// Criterion-trace table, one per sweep:
/// n,re(a_n),im(a_n),t_n,d_n,m_n_lo,m_n_hi,ratio_unza,ratio_nza,chain_cos
/// The single ratio_unza column carries the proven upper bound d^2/(m_lo+t);
/// the m_n_lo/m_n_hi columns expose the underlying interval.
std::string traces_to_csv(const std::vector<CriterionTrace>& traces);

/// trial,orientation,N,t,c,s_prime,s,dim_zero,dim_annulus,cos_alpha,bound_sharp,bound_weak,satisfied
std::string lemma1_rows_to_csv(const Lemma1Report& rep);

/// Model-level trial records:
/// trial_index,N,t,c,s_prime,s,sigma_max_Y,tau_frob_Y,residual_conjugation
std::string lemma1_trials_to_csv(const Lemma1Report& rep);

std::string lemma1_summary_to_json(const Lemma1Report& rep);

std::string theorem2_rows_to_csv(const Theorem2Report& rep);
std::string theorem2_summary_to_json(const Theorem2Report& rep);

/// n,k_star,min_bound,r_n,s_n,value_at_x1,value_at_rn,log_value_at_sn,log_value_at_nm1,log_bound_k_eq_n
std::string example3_table_to_csv(const std::vector<Example3Analysis>& rows);

} // namespace dtlab
