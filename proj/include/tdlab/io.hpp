#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tdlab/mdp.hpp"
#include "tdlab/reversible.hpp"
#include "tdlab/td.hpp"

namespace tdlab {

// Ordered maps keep every serialization byte-stable across runs.
using Json = nlohmann::ordered_json;

// Parses a whole file, reporting failures as std::invalid_argument with the
// path and the line:column of the offending byte.
Json read_json_file(const std::string& path);

// Writes text as-is (binary mode, so line endings survive untranslated).
void write_text_file(const std::string& path, const std::string& text);

// Shortest decimal text that reads back to the same double, '.' separator.
std::string format_double(double value);

// Typed field access with errors that name the enclosing structure.
const Json& require_field(const Json& j, const std::string& key, const std::string& context);
double require_number(const Json& j, const std::string& context);
std::int64_t require_integer(const Json& j, const std::string& context);

Eigen::VectorXd vector_from_json(const Json& j, const std::string& context);
Json vector_to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& context);
Json matrix_to_json(const Eigen::MatrixXd& m);

Json mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const Json& j);
Json policy_to_json(const Mdp& mdp, const PolicyTable& policy);
PolicyTable policy_from_json(const Json& j, const Mdp& mdp);
Json graph_to_json(const Graph& graph);
Graph graph_from_json(const Json& j);
Json chain_to_json(const Chain& chain);
Chain chain_from_json(const Json& j);
Json certificate_to_json(const ReversibilityCertificate& cert);

// File wrappers. read_mdp_file validates the model and throws with the full
// diagnostic list unless validate is false.
Mdp read_mdp_file(const std::string& path, bool validate = true);
PolicyTable read_policy_file(const std::string& path, const Mdp& mdp);
Graph read_graph_file(const std::string& path);
Chain read_chain_file(const std::string& path);
// One flat numeric array stored under the given key.
Eigen::VectorXd read_vector_file(const std::string& path, const std::string& key);
Eigen::MatrixXd read_matrix_file(const std::string& path, const std::string& key);

// CSV with LF line endings and shortest round-trip numbers.
std::string td_records_csv(const TdReport& report);

// FNV-1a of a string; instance hashes in reports use the hex form of the
// serialized object.
std::uint64_t fnv1a(std::string_view text);
std::string instance_hash(const Json& j);

}
