#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amod/bapu.hpp"
#include "amod/covering.hpp"
#include "amod/modspace.hpp"
#include "amod/verify.hpp"

namespace amod {

/// %.17g, with "nan" / "inf" / "-inf" spelled out.
std::string format_number(double v);

/// One experiment row per line:
/// point,experiment,symbol,alpha,s,p,q,b,rho,member,kind,lambda,omega,chirp,theta,order,
/// input_norm,output_norm,ratio,asserted,note
/// `point` is the index of the report in `reports` (sweep point).
void write_rows_csv(std::ostream& os, const std::vector<ExperimentReport>& reports);
void write_rows_json(std::ostream& os, const std::vector<ExperimentReport>& reports);

/// One line per report:
/// point,experiment,symbol,alpha,s,p,q,b,rho,rows,asserted_rows,min_ratio,median_ratio,max_ratio,spread,status
void write_aggregate_csv(std::ostream& os, const std::vector<ExperimentReport>& reports);
void write_aggregate_json(std::ostream& os, const std::vector<ExperimentReport>& reports);

/// k (semicolon-joined),a_k,band_norm,weighted_term
void write_band_profile_csv(std::ostream& os, const BandProfile& profile);
void write_band_profile_json(std::ostream& os, const BandProfile& profile);

/// k,xi_1..xi_n,a_k,rho_k,shape,interior
void write_covering_csv(std::ostream& os, const Covering& covering);

/// k,node,value
void write_windows_csv(std::ostream& os, const BapuFamily& bapu);

/// check,window,k,order,value
void write_uniformity_csv(std::ostream& os, const std::string& check, const UniformityReport& report, bool header);

/// Writes <stem>_rows.<fmt>, <stem>_aggregate.<fmt> and <stem>_summary.txt into `directory`.
void write_experiment_files(const std::string& directory, const std::string& stem,
                            const std::vector<ExperimentReport>& reports, const std::string& format);

}  // namespace amod
