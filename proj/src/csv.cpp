#include "pblab/csv.hpp"

#include <charconv>
#include <sstream>

#include "pblab/errors.hpp"

namespace pblab::csv {

std::string format(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

double parse(const std::string& s) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto r = std::from_chars(first, last, x);
  if (r.ec != std::errc() || r.ptr != last) throw ConfigError("not a number: '" + s + "'");
  return x;
}

void write_coefficients(std::ostream& out, const TrajectoryRecord& rec) {
  out << "t,j,coef\n";
  for (const TrajectoryRow& row : rec.rows)
    for (std::size_t j = 0; j < row.state.size(); ++j)
      out << format(row.t) << ',' << j + 1 << ',' << format(row.state[j]) << '\n';
}

void write_trajectory(std::ostream& out, const TrajectoryRecord& rec) {
  out << "t,L2_sq,grad_sq,Ht_sq,C_L2_sq,C_Ht_sq,a_value,l_value,energy_residual\n";
  for (const TrajectoryRow& r : rec.rows)
    out << format(r.t) << ',' << format(r.norms.l2_sq) << ',' << format(r.norms.grad_sq) << ','
        << format(r.norms.ht_sq) << ',' << format(r.window.c_l2_sq) << ','
        << format(r.window.c_ht_sq) << ',' << format(r.a_value) << ',' << format(r.l_value)
        << ',' << format(r.energy_residual) << '\n';
}

void write_bound(std::ostream& out, const std::vector<BoundRow>& rows) {
  out << "t,lhs_C_Ht_sq,rhs_lemma41,rho_sq,slack\n";
  for (const BoundRow& r : rows)
    out << format(r.t) << ',' << format(r.lhs) << ',' << format(r.rhs) << ','
        << format(r.rho_sq) << ',' << format(r.slack) << '\n';
}

void write_ensemble(std::ostream& out, const EnsembleRun& run) {
  out << "tau,sample_id,endpoint_C_Ht_sq,within_rho\n";
  for (const EnsembleMember& m : run.members)
    out << format(m.tau) << ',' << m.sample_id << ',' << format(m.endpoint_c_ht_sq) << ','
        << (m.within_rho ? 1 : 0) << '\n';
}

void write_regularity(std::ostream& out, const RegularityReport& rep) {
  out << "t,I1,I1_bound,I2,I2_bound,superposition_err\n";
  for (const RegularityRow& r : rep.rows)
    out << format(r.t) << ',' << format(r.i1) << ',' << format(r.i1_bound) << ','
        << format(r.i2) << ',' << format(r.i2_bound) << ',' << format(r.superposition_err)
        << '\n';
}

std::vector<std::vector<double>> read_table(const std::string& text,
                                            std::vector<std::string>* header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  if (!std::getline(in, line)) return rows;
  if (header != nullptr) {
    header->clear();
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header->push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream l(line);
    std::string cell;
    while (std::getline(l, cell, ',')) row.push_back(parse(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pblab::csv
