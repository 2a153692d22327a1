#pragma once

// Text field dumps and JSON/CSV serialization of reports.
//
// Field dump:
//   n <n>
//   k <k>
//   N <points per axis>
//   h <spacing>
//   box <lo_1> <hi_1> ... <lo_2n> <hi_2n>
// followed by one value per grid point in lexicographic order (first axis
// slowest), %.17g, `nan` at exterior points.

#include "mixhess/disc.hpp"
#include "mixhess/identities.hpp"
#include "mixhess/radial.hpp"
#include "mixhess/verify.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

namespace mixhess {

struct FieldDump {
    int n = 0;
    int k = 0;
    int N = 0;
    double h = 0.0;
    std::vector<double> box;     ///< lo/hi pairs per axis
    std::vector<double> values;  ///< N^{2n} entries
};

void write_field(const std::filesystem::path& path, const ScalarField& u, int k);
FieldDump read_field_dump(const std::filesystem::path& path);
/// Field on `grid` from a dump; checks header, box and the exterior pattern.
ScalarField field_from_dump(const FieldDump& dump, std::shared_ptr<const Grid> grid);

using Json = nlohmann::ordered_json;

Json to_json(const SolveReport& r);
Json to_json(const EstimateReport& r);
Json to_json(const IdentityReport& r);
Json grid_json(const Grid& g);

void write_json(const std::filesystem::path& path, const Json& j);

/// Minimal CSV writer: header then rows, numbers as %.17g.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    static std::string num(double v);

private:
    std::ofstream out_;
};

}  // namespace mixhess
