#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zolab/dyadic.hpp"
#include "zolab/kronecker.hpp"
#include "zolab/witness.hpp"

namespace zolab::csv {

inline constexpr const char* kSchema = "zolab-csv v1";

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// "# zolab-csv v1 <table> <params>" then the column row.
class Writer {
 public:
  Writer(std::ostream& os, const std::string& table, const nlohmann::json& params,
         const std::vector<std::string>& columns)
      : os_(os) {
    os_ << "# " << kSchema << ' ' << table << ' ' << params.dump() << '\n';
    row(columns);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << quote(fields[i]);
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

inline void write_enumeration(std::ostream& os, const std::vector<Dyadic>& xs, const nlohmann::json& params) {
  Writer w(os, "enumeration", params, {"index", "num", "exp", "value_decimal"});
  for (std::size_t i = 0; i < xs.size(); ++i)
    w.row({std::to_string(i), xs[i].num().get_str(), std::to_string(xs[i].exp()), xs[i].to_decimal()});
}

inline void write_profiles(std::ostream& os, const std::vector<witness::SumProfile>& ps,
                           const nlohmann::json& params) {
  Writer w(os, "sum_profile", params, {"x_num", "x_exp", "k", "block_sum", "cumulative", "cert_type", "cert_bound"});
  for (const auto& p : ps) {
    const auto x = Dyadic::require(p.x, "sample point");
    for (std::size_t k = 0; k < p.blocks.size(); ++k)
      w.row({x.num().get_str(), std::to_string(x.exp()), std::to_string(k + 1), p.blocks[k].get_str(),
             p.cumulative[k].get_str(), witness::cert_name(p.cert), p.bounds[k].get_str()});
  }
}

inline void write_step_function(std::ostream& os, const StepFunction& f, const nlohmann::json& params) {
  Writer w(os, "step_function", params, {"a", "b", "value"});
  for (const auto& p : f.pieces) w.row({p.a.get_str(), p.b.get_str(), p.value.get_str()});
}

/// One row per S_{i,k}: bands [(j n - 1) / den, (j n + 1) / den] for
/// j_lo <= j <= j_hi, den = t n, intersected with [alpha, alpha + 1].
inline void write_s_intervals(std::ostream& os, const kron::SWitness& sw, const nlohmann::json& params) {
  Writer w(os, "s_intervals", params, {"k", "i", "alpha", "t", "n", "den", "j_lo", "j_hi"});
  for (const auto& L : sw.levels)
    for (const auto& s : L.s)
      w.row({std::to_string(s.k), std::to_string(s.i), s.alpha.str(), L.t.get_str(), std::to_string(L.n),
             Integer(L.t * L.n).get_str(), s.j_lo.get_str(), s.j_hi.get_str()});
}

}  // namespace zolab::csv
