#pragma once

#include <optional>
#include <string>
#include <vector>

#include "af/scalar.hpp"

namespace af {

enum class Provenance { ExactTheorem, NumericalEstimate };

// Lower/upper frame constants with their origin.  `method` names the
// construction that produced the constants; `assumptions` lists hypotheses the
// caller asserted but the code could not check (e.g. irrational data).
struct FrameCertificate {
    double k = 0.0;
    double K = 0.0;
    Provenance provenance = Provenance::ExactTheorem;
    double tolerance = 0.0;
    std::string method;
    std::vector<std::string> assumptions;
    bool flagged_not_total = false;  // spectrum too small to span (k claim void)
    std::optional<Rational> k_exact, K_exact;
};

}  // namespace af
