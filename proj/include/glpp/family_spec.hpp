#ifndef GLPP_FAMILY_SPEC_HPP
#define GLPP_FAMILY_SPEC_HPP

#include <memory>
#include <optional>
#include <string>

#include "glpp/density.hpp"
#include "glpp/measures.hpp"

namespace glpp {

// ---------------------------------------------------------------------------
// Family specifications.  JSON documents look like
//   {"kind":"geometric","p":0.5,"cap":2000}
//   {"kind":"integrable","mu0":{"kind":"poisson","lambda":1}}
//   {"kind":"edge_lpp","mu":{"kind":"geometric","p":0.5}}
//   {"kind":"table","entries":[[1,0.5],[2,0.5]]}
//   {"kind":"exponential","lambda":1.0}
// and the shorthand grammar accepts
//   geometric:0.5   poisson:1   poisson_shifted:1   zeta:6   exp:1.0
//   table@file.json   integrable(poisson:1)   edge_lpp(geometric:0.5)
// A bare measure shorthand used as a family means the constant family.
// ---------------------------------------------------------------------------

struct FamilySpec {
    std::optional<MeasureFamily> discrete;
    std::optional<DensityFamily> continuous;
    std::string label;
    std::string canonical_json;

    bool is_continuous() const { return continuous.has_value(); }
    const MeasureFamily& fam() const {
        if (!discrete) throw ConfigError("family '" + label + "' is not discrete");
        return *discrete;
    }
    const DensityFamily& density() const {
        if (!continuous) throw ConfigError("family '" + label + "' is not continuous");
        return *continuous;
    }
};

FamilySpec parse_family(const std::string& text);           // shorthand or JSON
DiscreteMeasure parse_measure(const std::string& text);     // a bare mu0

}  // namespace glpp

#endif
