#include "tdlab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace tdlab {

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::invalid_argument("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based; walk the prefix to translate it into line:column.
    std::size_t line = 1, column = 1;
    const std::size_t stop = e.byte > 0 ? std::min(text.size(), e.byte - 1) : 0;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw std::invalid_argument(path + ":" + std::to_string(line) + ":" +
                                std::to_string(column) + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::invalid_argument("cannot open file for writing: " + path);
  out << text;
  if (!out)
    throw std::runtime_error("write failed: " + path);
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, result.ptr);
}

const Json& require_field(const Json& j, const std::string& key, const std::string& context) {
  if (!j.is_object())
    throw std::invalid_argument(context + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(context + ": missing field '" + key + "'");
  return *it;
}

double require_number(const Json& j, const std::string& context) {
  if (!j.is_number())
    throw std::invalid_argument(context + ": expected a number");
  return j.get<double>();
}

std::int64_t require_integer(const Json& j, const std::string& context) {
  if (!j.is_number_integer())
    throw std::invalid_argument(context + ": expected an integer");
  return j.get<std::int64_t>();
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& context) {
  if (!j.is_array())
    throw std::invalid_argument(context + ": expected an array of numbers");
  Eigen::VectorXd out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out[static_cast<Eigen::Index>(i)] =
        require_number(j[i], context + "[" + std::to_string(i) + "]");
  return out;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v[i]);
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& context) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(context + ": expected a nonempty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd out;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    const std::string row_context = context + "[" + std::to_string(r) + "]";
    if (!row.is_array())
      throw std::invalid_argument(row_context + ": expected an array of numbers");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      if (cols == 0)
        throw std::invalid_argument(row_context + ": rows must be nonempty");
      out.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument(row_context + ": expected " + std::to_string(cols) +
                                  " entries, got " + std::to_string(row.size()));
    }
    for (Eigen::Index c = 0; c < cols; ++c)
      out(r, c) = require_number(row[static_cast<std::size_t>(c)],
                                 row_context + "[" + std::to_string(c) + "]");
  }
  return out;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json mdp_to_json(const Mdp& mdp) {
  Json out;
  out["n_states"] = mdp.n_states;
  Json states = Json::array();
  for (const auto& state_actions : mdp.actions) {
    Json actions = Json::array();
    for (const ActionModel& action : state_actions) {
      Json a;
      a["name"] = action.name;
      Json kernel = Json::array();
      for (const auto& [t, p] : action.kernel)
        kernel.push_back(Json::array({t, p}));
      Json rewards = Json::array();
      for (const auto& [t, r] : action.rewards)
        rewards.push_back(Json::array({t, r}));
      a["kernel"] = std::move(kernel);
      a["rewards"] = std::move(rewards);
      actions.push_back(std::move(a));
    }
    Json state;
    state["actions"] = std::move(actions);
    states.push_back(std::move(state));
  }
  out["states"] = std::move(states);
  out["reward_noise_std"] = mdp.reward_noise_std;
  return out;
}

namespace {

std::vector<std::pair<Eigen::Index, double>> pairs_from_json(const Json& j,
                                                             const std::string& context) {
  if (!j.is_array())
    throw std::invalid_argument(context + ": expected an array of [state, value] pairs");
  std::vector<std::pair<Eigen::Index, double>> out;
  out.reserve(j.size());
  std::size_t i = 0;
  for (const Json& item : j) {
    const std::string pair_context = context + "[" + std::to_string(i++) + "]";
    if (!item.is_array() || item.size() != 2)
      throw std::invalid_argument(pair_context + ": expected a [state, value] pair");
    out.emplace_back(require_integer(item[0], pair_context + "[0]"),
                     require_number(item[1], pair_context + "[1]"));
  }
  return out;
}

}  // namespace

Mdp mdp_from_json(const Json& j) {
  Mdp mdp;
  mdp.n_states = require_integer(require_field(j, "n_states", "mdp"), "mdp.n_states");
  const Json& states = require_field(j, "states", "mdp");
  if (!states.is_array())
    throw std::invalid_argument("mdp.states: expected an array");
  if (j.contains("reward_noise_std"))
    mdp.reward_noise_std = require_number(j["reward_noise_std"], "mdp.reward_noise_std");

  Eigen::Index s = 0;
  for (const Json& state : states) {
    const std::string state_context = "mdp.states[" + std::to_string(s++) + "]";
    const Json& actions = require_field(state, "actions", state_context);
    if (!actions.is_array())
      throw std::invalid_argument(state_context + ".actions: expected an array");
    std::vector<ActionModel> models;
    std::size_t a = 0;
    for (const Json& action : actions) {
      const std::string action_context =
          state_context + ".actions[" + std::to_string(a++) + "]";
      ActionModel model;
      const Json& name = require_field(action, "name", action_context);
      if (!name.is_string())
        throw std::invalid_argument(action_context + ".name: expected a string");
      model.name = name.get<std::string>();
      model.kernel = pairs_from_json(require_field(action, "kernel", action_context),
                                     action_context + ".kernel");
      model.rewards = pairs_from_json(require_field(action, "rewards", action_context),
                                      action_context + ".rewards");
      models.push_back(std::move(model));
    }
    mdp.actions.push_back(std::move(models));
  }
  return mdp;
}

Json policy_to_json(const Mdp& mdp, const PolicyTable& policy) {
  check_policy(mdp, policy);
  Json probs = Json::array();
  for (Eigen::Index s = 0; s < mdp.n_states; ++s)
    for (Eigen::Index a = 0; a < policy.probs[s].size(); ++a)
      if (policy.probs[s][a] != 0.0)
        probs.push_back(Json::array({s, a, policy.probs[s][a]}));
  Json out;
  out["probs"] = std::move(probs);
  return out;
}

PolicyTable policy_from_json(const Json& j, const Mdp& mdp) {
  const Json& probs = require_field(j, "probs", "policy");
  if (!probs.is_array())
    throw std::invalid_argument("policy.probs: expected an array of [state, action, p] triples");

  PolicyTable policy;
  policy.probs.resize(mdp.n_states);
  for (Eigen::Index s = 0; s < mdp.n_states; ++s)
    policy.probs[s] = Eigen::VectorXd::Zero(mdp.action_count(s));

  std::size_t i = 0;
  for (const Json& item : probs) {
    const std::string context = "policy.probs[" + std::to_string(i++) + "]";
    if (!item.is_array() || item.size() != 3)
      throw std::invalid_argument(context + ": expected a [state, action, p] triple");
    const Eigen::Index s = require_integer(item[0], context + "[0]");
    const Eigen::Index a = require_integer(item[1], context + "[1]");
    const double p = require_number(item[2], context + "[2]");
    if (s < 0 || s >= mdp.n_states)
      throw std::invalid_argument(context + ": state " + std::to_string(s) + " out of range");
    if (a < 0 || a >= mdp.action_count(s))
      throw std::invalid_argument(context + ": action " + std::to_string(a) +
                                  " out of range for state " + std::to_string(s));
    policy.probs[s][a] = p;
  }
  check_policy(mdp, policy);
  return policy;
}

Json graph_to_json(const Graph& graph) {
  Json edges = Json::array();
  for (const auto& [u, v] : graph.edges())
    edges.push_back(Json::array({u, v}));
  Json out;
  out["n"] = graph.size();
  out["edges"] = std::move(edges);
  return out;
}

Graph graph_from_json(const Json& j) {
  const Eigen::Index n = require_integer(require_field(j, "n", "graph"), "graph.n");
  const Json& edges = require_field(j, "edges", "graph");
  if (!edges.is_array())
    throw std::invalid_argument("graph.edges: expected an array of [u, v] pairs");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> list;
  std::size_t i = 0;
  for (const Json& item : edges) {
    const std::string context = "graph.edges[" + std::to_string(i++) + "]";
    if (!item.is_array() || item.size() != 2)
      throw std::invalid_argument(context + ": expected a [u, v] pair");
    list.emplace_back(require_integer(item[0], context + "[0]"),
                      require_integer(item[1], context + "[1]"));
  }
  return Graph(n, std::move(list));
}

Json certificate_to_json(const ReversibilityCertificate& cert) {
  Json out;
  out["tolerance"] = cert.tolerance;
  out["max_violation"] = cert.max_violation;
  out["structural_ok"] = cert.structural_ok;
  Json edges = Json::array();
  for (const auto& [s, t] : cert.one_way_edges)
    edges.push_back(Json::array({s, t}));
  out["one_way_edges"] = std::move(edges);
  out["pass"] = cert.pass;
  return out;
}

Json chain_to_json(const Chain& chain) {
  Json out;
  out["p"] = matrix_to_json(chain.p());
  if (chain.cached_mu())
    out["mu"] = vector_to_json(*chain.cached_mu());
  if (chain.certificate())
    out["certificate"] = certificate_to_json(*chain.certificate());
  return out;
}

namespace {

ReversibilityCertificate certificate_from_json(const Json& j) {
  ReversibilityCertificate cert;
  cert.tolerance = require_field(j, "tolerance", "certificate").get<double>();
  cert.max_violation = require_field(j, "max_violation", "certificate").get<double>();
  cert.structural_ok = require_field(j, "structural_ok", "certificate").get<bool>();
  cert.pass = require_field(j, "pass", "certificate").get<bool>();
  for (const Json& edge : require_field(j, "one_way_edges", "certificate")) {
    if (!edge.is_array() || edge.size() != 2)
      throw std::invalid_argument("certificate.one_way_edges: expected [s, t] pairs");
    cert.one_way_edges.emplace_back(edge[0].get<Eigen::Index>(), edge[1].get<Eigen::Index>());
  }
  return cert;
}

}  // namespace

Chain chain_from_json(const Json& j) {
  Eigen::MatrixXd p = matrix_from_json(require_field(j, "p", "chain"), "chain.p");
  if (p.rows() != p.cols())
    throw std::invalid_argument("chain.p: expected a square matrix, got " +
                                std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
  if (!j.contains("mu"))
    return Chain(std::move(p));
  Eigen::VectorXd mu = vector_from_json(j["mu"], "chain.mu");
  if (j.contains("certificate"))
    return Chain(std::move(p), std::move(mu), certificate_from_json(j["certificate"]));
  return Chain(std::move(p), std::move(mu));
}

Mdp read_mdp_file(const std::string& path, bool validate) {
  Mdp mdp = mdp_from_json(read_json_file(path));
  if (validate) {
    const auto diagnostics = validate_mdp(mdp);
    if (!diagnostics.empty()) {
      std::string text = path + ": invalid mdp:";
      for (const Diagnostic& d : diagnostics)
        text += "\n  " + d.location + ": " + d.message;
      throw std::invalid_argument(text);
    }
  }
  return mdp;
}

PolicyTable read_policy_file(const std::string& path, const Mdp& mdp) {
  return policy_from_json(read_json_file(path), mdp);
}

Graph read_graph_file(const std::string& path) {
  return graph_from_json(read_json_file(path));
}

Chain read_chain_file(const std::string& path) {
  return chain_from_json(read_json_file(path));
}

Eigen::VectorXd read_vector_file(const std::string& path, const std::string& key) {
  return vector_from_json(require_field(read_json_file(path), key, path), path + ":" + key);
}

Eigen::MatrixXd read_matrix_file(const std::string& path, const std::string& key) {
  return matrix_from_json(require_field(read_json_file(path), key, path), path + ":" + key);
}

std::string td_records_csv(const TdReport& report) {
  std::string out = "step,mixed_norm,dir_norm_sq,mu_norm_sq,expected_step_norm\n";
  for (const TdRecord& r : report.records) {
    out += std::to_string(r.step);
    out += ',';
    out += format_double(r.mixed_norm);
    out += ',';
    out += format_double(r.dir_norm_sq);
    out += ',';
    out += format_double(r.mu_norm_sq);
    out += ',';
    out += format_double(r.expected_step_norm);
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string instance_hash(const Json& j) {
  const std::uint64_t hash = fnv1a(j.dump());
  char buffer[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buffer[i] = digits[(hash >> (4 * (15 - i))) & 0xf];
  }
  buffer[16] = '\0';
  return std::string(buffer, 16);
}

}
