#ifndef PBLAB_CSV_HPP
#define PBLAB_CSV_HPP

// CSV emitters. Every real is written with 17 significant digits so that
// parsing returns the identical double.

#include <ostream>
#include <string>
#include <vector>

#include "pblab/attractor.hpp"
#include "pblab/energy.hpp"
#include "pblab/solver.hpp"

namespace pblab::csv {

std::string format(double x);
double parse(const std::string& s);

// t,j,coef
void write_coefficients(std::ostream& out, const TrajectoryRecord& rec);
// t,L2_sq,grad_sq,Ht_sq,C_L2_sq,C_Ht_sq,a_value,l_value,energy_residual
void write_trajectory(std::ostream& out, const TrajectoryRecord& rec);
// t,lhs_C_Ht_sq,rhs_lemma41,rho_sq,slack
void write_bound(std::ostream& out, const std::vector<BoundRow>& rows);
// tau,sample_id,endpoint_C_Ht_sq,within_rho
void write_ensemble(std::ostream& out, const EnsembleRun& run);
// t,I1,I1_bound,I2,I2_bound,superposition_err
void write_regularity(std::ostream& out, const RegularityReport& rep);

// Rows of a headed CSV file of reals, header excluded.
std::vector<std::vector<double>> read_table(const std::string& text,
                                            std::vector<std::string>* header = nullptr);

}  // namespace pblab::csv

#endif  // PBLAB_CSV_HPP
