#pragma once

#include <json.hpp>

#include "csturm/spectra.hpp"
#include "csturm/weyl.hpp"

namespace csturm {

using Json = nlohmann::ordered_json;

// Non-finite doubles become the strings "inf", "-inf", "nan".
Json number(double v);
double number_from(const Json& j);
Json complex_json(cd z);  // [re, im]
cd complex_from(const Json& j);

Json to_json(const Interval& iv);
Interval interval_from_json(const Json& j);
// {interval, expr, meta}
Json to_json(const Potential& p);
Potential potential_from_json(const Json& j);

Json to_json(const TailRecord& t);
Json to_json(const DimReport& r);
Json to_json(const ClassificationReport& r);
Json to_json(const WeylDisk& d);
Json to_json(const TrichotomyReport& r, bool with_trace = false);
Json to_json(const DissipativityReport& r);
Json to_json(const Eigenvalue& e);
Json to_json(const FindResult& r);

}  // namespace csturm
