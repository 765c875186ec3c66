#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "af/geometry.hpp"

namespace af {

// Parsed job description.  Commands pick the fields they need and reject
// configs that lack them; dimensions are checked for consistency up front.
struct JobConfig {
    int dimension = 0;  // 0 = infer from the first dimensioned field
    std::optional<Domain> domain;
    std::optional<Domain> domain2;
    std::optional<SpectrumSpec> spectrum;
    std::optional<SpectrumSpec> spectrum2;
    std::optional<RationalMatrix> R;
    std::vector<RationalVec> B;
    std::vector<RationalVec> L;
    std::optional<ExactVec> a;
    std::optional<ExactVec> beta;
    std::optional<ExactVec> t;
    std::vector<ExactVec> lambda0;
    std::optional<double> k, K;    // frame constants of (domain, spectrum)
    std::optional<double> k2, K2;  // frame constants of (domain2, spectrum2)
    int denominator_bound = 0;     // "q" in the config
    ExactScalar radius = ExactScalar(16);
    int depth = 4;
    int grid = 32;
    std::uint64_t seed = 1;
    std::optional<int> threads;
    bool limit = false;  // muhat: evaluate the limit transform instead of depth n
};

// Config documents are UTF-8 JSON.  Scalars may be integers, doubles (taken at
// their exact binary value), "num/den" strings, or tagged radicals
// {"tag":"sqrt","of":2,"times":"1/2","plus":0}.
JobConfig parse_config_text(const std::string& text);
JobConfig load_config(const std::string& path);

// Dispatch `affine-frames <command> --config ... [--out DIR] [--radius N]
// [--depth J] [--grid N] [--seed U64] [--threads N]`.  Writes report.json and
// any command-specific CSV into the output directory.  Exit codes: 0 success
// (negative answers included), 2 hypothesis violation, 3 numeric failure,
// 4 bad arguments or config.
int run_cli(int argc, const char* const* argv);

}  // namespace af
