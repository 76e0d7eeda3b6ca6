#pragma once

// JSON encodings of the library's result types, shared by the CLI and the
// Python module.

#include <complex>
#include <json.hpp>

#include "spectrace/lattice.hpp"
#include "spectrace/special_fn.hpp"
#include "spectrace/torus_spectral.hpp"

namespace spectrace::records {

using Json = nlohmann::ordered_json;

Json complex_value(std::complex<double> z);
Json bounded_value(const special::BoundedValue& v);
Json sum_outcome(const lattice::SumOutcome& s);
Json certificate(const torus::DivergenceCertificate& c);
Json certificate(const torus::GrowthCertificate& c);

/// {operator, power, status, value?, error_bound?, terms, radius, certificate?,
///  extension_flag, cross_check?, notes?}
Json trace_record(const torus::TraceClassification& t);

}  // namespace spectrace::records
