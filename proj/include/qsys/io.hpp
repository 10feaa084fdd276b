#pragma once

#include "qsys/analytic.hpp"
#include "qsys/bounds.hpp"
#include "qsys/certify.hpp"
#include "qsys/construct.hpp"
#include "qsys/schlesinger.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qsys {

using Json = nlohmann::json;

// --- system files -------------------------------------------------------------
// Two formats:
//   { "n": .., "variables": ["t1",..], "entries": [[cell,..],..] } with
//     cell = {"dt": "t1", "coeff": "<expr>"} or an array of those;
//   { "poles": ["0","1","1/2+3i"], "residues": [[["1/2","0"],..],..] }.

struct LoadedSystem {
    std::string format; // "matrix-form" | "fuchsian"
    std::optional<MatrixOneForm> form;
    std::optional<FuchsianSystem> fuchsian;
};

LoadedSystem parse_system(const Json &j);
LoadedSystem load_system(const std::string &path);

// Convert either representation to the other (throws when impossible, with the
// rejection text).
FuchsianSystem as_fuchsian(const LoadedSystem &sys);
MatrixOneForm as_form(const LoadedSystem &sys);

Json system_to_json(const MatrixOneForm &omega);
Json system_to_json(const FuchsianSystem &f);

// --- reports -------------------------------------------------------------------

Json certificate_to_json(const QuasiunipotenceCertificate &cert);
Json bound_report_to_json(const BoundReport &report);
BoundReport bound_report_from_json(const Json &j); // round-trip support
Json complexity_to_json(const ComplexityReport &c);
Json monodromy_to_json(const MonodromyResult &m);
Json zero_count_to_json(const ZeroCount &z);

BoundConfig bound_config_from_json(const Json &j);
BoundConfig load_bound_config(const std::string &path); // empty path -> defaults

// --- geometry / jobs -------------------------------------------------------------

Json complex_to_json(Complex z);
Complex complex_from_json(const Json &j);
Triangle triangle_from_json(const Json &j);
Json triangle_to_json(const Triangle &t);

// flow specs: { "system": <fuchsian>, "trajectories": [[[re,im],..],..],
//               "checkpoints": int, "tol": double, "freeze_residues": bool }
struct FlowSpec {
    ConfigurationPath path;
    FlowOptions options;
};
FlowSpec flow_spec_from_json(const Json &j);
Json checkpoint_to_json(const FlowCheckpoint &ck);
Json event_to_json(const FlowEvent &ev);

// --- fixtures ---------------------------------------------------------------------

struct Fixture {
    std::string name;
    std::string file; // relative to the index directory
    std::string notes;
    Json expected; // map name -> {"value":.., "provenance": "paper|trivial|derived-with-oracle"}
};
std::vector<Fixture> load_fixture_index(const std::string &dir);

// --- misc ----------------------------------------------------------------------

std::string format_double(double v); // fixed %.17g so reruns are byte-identical
void save_json(const std::string &path, const Json &j);
Json load_json(const std::string &path);

class CsvWriter {
public:
    CsvWriter(std::string schema_comment, std::vector<std::string> columns);
    void add_row(const std::vector<std::string> &cells);
    std::string str() const;
    void save(const std::string &path) const;

private:
    std::string schema_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace qsys
