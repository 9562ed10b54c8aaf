#pragma once

#include "discenv/domain.hpp"
#include "discenv/family.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace discenv::cli {

using Json = nlohmann::json;

/// A configuration problem, already formatted as "file:line: message".
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Envelope, Oracle, Compare, Homotopy, Cesaro };

const char* command_name(Command c);

/// Parsed JSON with the source line of every value, keyed by JSON pointer.
struct ConfigSource {
    std::string name;
    Json doc;
    std::map<std::string, int> lines;

    int line_of(const std::string& pointer) const;
};

ConfigSource parse_config(const std::string& text, const std::string& name);
ConfigSource load_config(const std::string& path);

/// Validates the document for a command and returns it with every default
/// filled in. Unknown keys, wrong types and out-of-range values raise
/// SchemaError naming the offending line.
Json effective_config(const ConfigSource& source, Command command);

// Builders over an effective config section.
DomainPair build_pair(const Json& pair);
HartogsPair build_hartogs(const Json& pair);
Obstacle build_obstacle(const Json& obstacle, const Json& pair);
std::vector<Point> build_points(const Json& points);
DiscFamily parse_family(const std::string& tag);
std::vector<DiscFamily> build_families(const Json& families, const DomainPair& pair, PointView centre);

Json point_to_json(PointView p);

}  // namespace discenv::cli
