#ifndef KATOLIM_IO_HPP
#define KATOLIM_IO_HPP

#include <string>

#include <json.hpp>

#include "katolim/kato.hpp"
#include "katolim/maps.hpp"
#include "katolim/means.hpp"
#include "katolim/renyi.hpp"
#include "katolim/sweep.hpp"

namespace katolim::io {

using json = nlohmann::ordered_json;

// Matrix files: {"n": rows, "m": cols, "re": [[..]], "im": [[..]]},
// row-major; "m" omitted when square, "im" omitted when real.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

Matrix load_matrix(const std::string& path);
PSDMatrix load_psd(const std::string& path);

// Map spec files: {"kind": "kraus"|"congruence"|"block_average"|"trace_state", ...}
// with matrices inline under "operators" / "K" / "rho", and "block_dim" for
// block_average.
json map_to_json(const PositiveMapSpec& m);
PositiveMapSpec map_from_json(const json& j);
PositiveMapSpec load_map(const std::string& path);

// Mean spec strings: "name[:alpha]", e.g. "geometric:0.5", "logarithmic".
MeanSpec parse_mean(const std::string& text);

json congruence_result_to_json(const CongruenceLimitResult& r);
json map_result_to_json(const MapLimitResult& r);
json report_to_json(const ConvergenceReport& r);
json renyi_to_json(const RenyiPair& r);
json zero_limits_to_json(const ZeroLimitReport& r);
json extended_to_json(const ExtendedReal& v);

std::string format_matrix_table(const Matrix& m, int precision = 9);

} // namespace katolim::io

#endif
