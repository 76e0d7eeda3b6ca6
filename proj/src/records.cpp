#include "spectrace/records.hpp"

namespace spectrace::records {

Json complex_value(std::complex<double> z) {
  Json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Json bounded_value(const special::BoundedValue& v) {
  Json j;
  j["value"] = v.value;
  j["error_bound"] = v.error_bound;
  j["terms_used"] = v.terms_used;
  return j;
}

Json sum_outcome(const lattice::SumOutcome& s) {
  Json j;
  j["value"] = complex_value(s.value);
  j["abs_sum"] = s.abs_sum;
  j["tail_bound"] = s.tail_bound;
  j["terms"] = s.terms;
  j["radius"] = s.radius;
  return j;
}

Json certificate(const torus::DivergenceCertificate& c) {
  Json j;
  j["kind"] = "dyadic_blocks";
  j["target"] = c.target;
  j["radius"] = c.radius;
  j["attained"] = c.attained;
  j["meets_target"] = c.meets_target();
  j["block_sums"] = c.block_sums;
  j["block_floors"] = c.block_floors;
  j["floors_hold"] = c.floors_hold();
  j["terms"] = c.terms;
  return j;
}

Json certificate(const torus::GrowthCertificate& c) {
  Json j;
  j["kind"] = "monotone_growth";
  j["series"] = c.series;
  j["lower_bound_formula"] = c.lower_bound_formula;
  j["radii"] = c.radii;
  j["partial_abs_sums"] = c.partial_abs_sums;
  j["lower_bounds"] = c.lower_bounds;
  j["strictly_increasing"] = c.strictly_increasing();
  j["dominates_lower_bounds"] = c.dominates_lower_bounds();
  j["terms"] = c.terms;
  return j;
}

Json trace_record(const torus::TraceClassification& t) {
  Json j;
  j["operator"] = t.operator_name;
  j["power"] = t.power;
  j["status"] = t.status_name();
  if (const auto* tc = std::get_if<torus::TraceClass>(&t.status)) {
    j["value"] = complex_value(tc->value);
    j["error_bound"] = tc->error_bound;
    j["terms"] = tc->terms;
    j["radius"] = tc->radius;
    if (tc->cross_check) {
      const auto& c = *tc->cross_check;
      Json cc;
      cc["route"] = c.route;
      cc["value"] = complex_value(c.value);
      cc["bound"] = c.bound;
      cc["terms"] = c.terms;
      cc["radius"] = c.radius;
      cc["agrees"] = c.agrees;
      j["cross_check"] = cc;
    }
  } else if (const auto* nt = std::get_if<torus::NotTraceClass>(&t.status)) {
    std::visit(
        [&j](const auto& cert) {
          j["terms"] = cert.terms;
          j["certificate"] = certificate(cert);
        },
        nt->certificate);
    if (const auto* d = std::get_if<torus::DivergenceCertificate>(&nt->certificate)) {
      j["radius"] = d->radius;
    } else {
      j["radius"] = std::get<torus::GrowthCertificate>(nt->certificate).radii.back();
    }
  } else {
    j["terms"] = 0;
    j["radius"] = 0;
    j["reason"] = std::get<torus::Undetermined>(t.status).reason;
  }
  j["extension_flag"] = t.extension;
  if (!t.notes.empty()) j["notes"] = t.notes;
  return j;
}

}  // namespace spectrace::records
