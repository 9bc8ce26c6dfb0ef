#pragma once

#include <vector>

#include "json.hpp"

#include "monoproj/basechange.hpp"
#include "monoproj/grproj.hpp"
#include "monoproj/p1sheaf.hpp"
#include "monoproj/tmod.hpp"

namespace monoproj {

nlohmann::json graph_to_json(const FunctionalGraph& g);
nlohmann::json presentation_to_json(const TPresentation& p);
nlohmann::json graded_to_json(const GradedPresentation& m);
nlohmann::json sheaf_to_json(const P1Sheaf& F);
nlohmann::json sections_to_json(const P1Sheaf& F, const std::vector<GlobalSection>& secs);
nlohmann::json report_to_json(const LinearSystemReport& rep);

}  // namespace monoproj
