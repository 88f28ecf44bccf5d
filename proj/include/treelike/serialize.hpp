#ifndef TREELIKE_SERIALIZE_HPP
#define TREELIKE_SERIALIZE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "treelike/construct.hpp"
#include "treelike/decide.hpp"
#include "treelike/height.hpp"
#include "treelike/suite.hpp"

namespace treelike {

using Json = nlohmann::json;

// Thrown for malformed or inconsistent JSON input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kStateFormatVersion = 1;

Json to_json(const Dyadic& x);   // {"num": "<decimal>", "exp": k}
Json to_json(const Quad& x);     // {"rat": Dyadic, "irr": Dyadic}
Json to_json(const Point2& p);   // {"x": Dyadic, "y": Dyadic}
Json to_json(const MetricTree& tree);
Json to_json(const TreePath& path);
Json to_json(const PlanePath& path);
Json to_json(const PlanarMap& map);
Json to_json(const OrderedTriangle& t);
Json to_json(const TowerLevel& level);
Json to_json(const HeightFunction& h);
Json to_json(const HeightReport& report);
Json to_json(const ClassReport& report);
Json to_json(const Verdict& verdict);
Json to_json(const Check& check);
Json to_json(const Certificate& cert);  // reports only, no witness
// One section per invariant family, each with "passed"; "passed" at the top
// is their conjunction.
Json to_json(const SuiteReport& report);

// Dyadics also accept an integer or a string such as "3/8" or "-1/2^5".
Dyadic dyadic_from_json(const Json& j);
Quad quad_from_json(const Json& j);
Point2 point_from_json(const Json& j);
MetricTree tree_from_json(const Json& j);
TreePath tree_path_from_json(const Json& j, std::shared_ptr<const MetricTree> tree);
PlanarMap map_from_json(const Json& j, std::shared_ptr<const MetricTree> tree);
OrderedTriangle triangle_from_json(const Json& j);
TowerLevel level_from_json(const Json& j);
HeightFunction height_from_json(const Json& j);

/*
 * A loop file: either {"breakpoints": [{"param": D, "point": P}, ...]} or
 * {"points": [P, ...]}. Without params, point k of m + 1 gets k / 2^j with
 * 2^j >= m, and the last point gets 1.
 */
PlanePath plane_path_from_json(const Json& j);

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

struct StateFile {
  std::vector<TowerLevel> levels;
  std::string digest;         // as stored
  std::string computed;       // recomputed from the levels
  bool digest_ok() const { return digest == computed; }
};

// {"format_version", "levels", "metadata", "digest"}; the digest covers
// the compact dump of "levels".
Json state_to_json(const std::vector<TowerLevel>& levels);
std::string dump_state(const std::vector<TowerLevel>& levels);
StateFile state_from_json(const Json& j);
StateFile load_state(const std::string& path);

}  // namespace treelike

#endif  // TREELIKE_SERIALIZE_HPP
