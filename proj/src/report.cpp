#include "bigframe/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace bigframe {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

const char* bool_name(bool b) { return b ? "true" : "false"; }

void key_value(std::ostringstream& os, const char* key,
               const std::string& value) {
  os << key << '=' << value << '\n';
}

std::string a_opt_string(const ClassificationReport& rep) {
  if (rep.optimal_bounds) return format_value(rep.optimal_bounds->lower);
  if (rep.degenerate_k) return "inf";
  return "none";
}

std::string b_opt_string(const ClassificationReport& rep) {
  if (rep.optimal_bounds) return format_value(rep.optimal_bounds->upper);
  return "none";
}

}  // namespace

std::string emit_report(const ClassificationReport& rep, bool machine) {
  std::ostringstream os;
  os << "verdict: " << verdict_name(rep.verdict);
  if (rep.phi_equals_psi)
    os << " (families coincide; the verdict also holds as a K-g-frame "
          "statement)";
  os << '\n';
  if (rep.optimal_bounds) {
    os << "optimal bounds: [" << format_value(rep.optimal_bounds->lower)
       << ", " << format_value(rep.optimal_bounds->upper) << "]\n";
  } else if (rep.degenerate_k) {
    os << "optimal bounds: K = 0, every positive lower bound holds "
          "vacuously\n";
  } else {
    os << "optimal bounds: none (lower inequality fails)\n";
  }
  if (!machine) return os.str();

  key_value(os, "classification", verdict_name(rep.verdict));
  key_value(os, "A_opt", a_opt_string(rep));
  key_value(os, "B_opt", b_opt_string(rep));
  key_value(os, "hermiticity_residual", format_value(rep.hermiticity_residual));
  key_value(os, "min_eigenvalue", format_value(rep.min_eigenvalue));
  key_value(os, "tight_residual", format_value(rep.tight_residual));
  key_value(os, "k_rank", std::to_string(rep.k_rank));
  key_value(os, "degenerate_k", bool_name(rep.degenerate_k));
  return os.str();
}

std::string emit_bounds_report(const BoundsResult& res, bool machine) {
  std::ostringstream os;
  const std::string a = res.bounds ? format_value(res.bounds->lower)
                                   : (res.degenerate_k ? "inf" : "none");
  const std::string b =
      res.bounds ? format_value(res.bounds->upper) : "none";
  os << "optimal bounds: [" << a << ", " << b << "]\n";
  if (!machine) return os.str();
  key_value(os, "A_opt", a);
  key_value(os, "B_opt", b);
  return os.str();
}

std::string emit_report(const StabilityCertificate& cert, bool machine) {
  std::ostringstream os;
  os << "stability verdict: " << bool_name(cert.verdict) << '\n';
  os << "hypothesis margin: " << format_value(cert.hypothesis_margin) << '\n';
  os << "predicted bounds: [" << format_value(cert.predicted.lower) << ", "
     << format_value(cert.predicted.upper) << "] (" << cert.predicted.source
     << ")\n";
  if (cert.achieved) {
    os << "achieved bounds: [" << format_value(cert.achieved->lower) << ", "
       << format_value(cert.achieved->upper) << "]\n";
  }
  os << "note: " << cert.lower_bound_note << '\n';
  if (!machine) return os.str();
  key_value(os, "verdict", bool_name(cert.verdict));
  key_value(os, "hypothesis_margin", format_value(cert.hypothesis_margin));
  key_value(os, "predicted_lower", format_value(cert.predicted.lower));
  key_value(os, "predicted_upper", format_value(cert.predicted.upper));
  key_value(os, "candidate_verdict", verdict_name(cert.candidate_verdict));
  if (cert.achieved) {
    key_value(os, "achieved_lower", format_value(cert.achieved->lower));
    key_value(os, "achieved_upper", format_value(cert.achieved->upper));
  }
  return os.str();
}

std::string emit_report(const SuiteResult& suite, bool machine) {
  std::ostringstream os;
  os << "theorem " << suite.theorem << ": " << (suite.total - suite.failed)
     << '/' << suite.total << " pass, worst margin "
     << format_value(suite.worst_margin) << '\n';
  for (const auto& note : suite.notes) os << "  note: " << note << '\n';
  if (!machine) return os.str();
  key_value(os, "theorem", suite.theorem);
  key_value(os, "total", std::to_string(suite.total));
  key_value(os, "failed", std::to_string(suite.failed));
  key_value(os, "worst_margin", format_value(suite.worst_margin));
  if (!suite.failing_seeds.empty()) {
    std::ostringstream seeds;
    for (std::size_t i = 0; i < suite.failing_seeds.size(); ++i) {
      if (i) seeds << ',';
      seeds << suite.failing_seeds[i];
    }
    key_value(os, "failing_seeds", seeds.str());
  }
  return os.str();
}

}  // namespace bigframe
