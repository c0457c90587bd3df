#include "sas/io.hpp"

#include "sas/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sas {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* name) {
    if (!obj.is_object() || !obj.contains(name)) {
        throw Error(ErrorCode::ParseError, std::string("missing field '") + name + "'");
    }
    return obj.at(name);
}

template <typename T>
T get_as(const json& value, const std::string& what) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::ParseError, "field '" + what + "' has the wrong type");
    }
}

void expect_array(const json& value, std::size_t size, const std::string& what) {
    if (!value.is_array()) {
        throw Error(ErrorCode::ParseError, "field '" + what + "' must be an array");
    }
    if (value.size() != size) {
        throw Error(ErrorCode::DimensionMismatch, "field '" + what + "' has " +
                                                      std::to_string(value.size()) + " entries, expected " +
                                                      std::to_string(size));
    }
}

std::vector<double> read_matrix(const json& value, std::size_t rows, std::size_t cols,
                                const std::string& what) {
    expect_array(value, rows, what);
    std::vector<double> out;
    out.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string row_name = what + "[" + std::to_string(i) + "]";
        expect_array(value[i], cols, row_name);
        for (const auto& x : value[i]) {
            if (!x.is_number()) {
                throw Error(ErrorCode::ParseError, "field '" + row_name + "' must hold numbers");
            }
            out.push_back(x.get<double>());
        }
    }
    return out;
}

json write_matrix(const std::vector<double>& data, std::size_t rows, std::size_t cols) {
    json out = json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        out.push_back(std::vector<double>(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
                                          data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols)));
    }
    return out;
}

PdaAvailability read_pda(const json& obj, std::size_t n, std::size_t m) {
    return PdaAvailability{n, m, read_matrix(field(obj, "rho"), n, m, "rho")};
}

ExplicitAvailability read_explicit(const json& obj, std::size_t n, std::size_t m) {
    const json& subsets = field(obj, "subsets");
    expect_array(subsets, n, "subsets");
    ExplicitAvailability table{m, {}};
    for (std::size_t s = 0; s < n; ++s) {
        const std::string where = "subsets[" + std::to_string(s) + "]";
        if (!subsets[s].is_array()) {
            throw Error(ErrorCode::ParseError, "field '" + where + "' must be an array");
        }
        std::vector<SubsetMass> entries;
        for (const auto& entry : subsets[s]) {
            const auto actions = get_as<std::vector<std::size_t>>(field(entry, "actions"), where + ".actions");
            for (std::size_t k : actions) {
                if (k >= m) {
                    throw Error(ErrorCode::DimensionMismatch,
                                where + " names action " + std::to_string(k) + " outside the base set");
                }
            }
            entries.push_back({make_mask(actions), get_as<double>(field(entry, "probability"), where)});
        }
        table.states.push_back(std::move(entries));
    }
    return table;
}

json write_pda(const PdaAvailability& pda) {
    return json{{"kind", "pda"}, {"rho", write_matrix(pda.rho, pda.n_states, pda.n_actions)}};
}

json write_explicit(const ExplicitAvailability& table) {
    json subsets = json::array();
    for (const auto& entries : table.states) {
        json list = json::array();
        for (const auto& entry : entries) {
            list.push_back(json{{"actions", mask_actions(entry.mask)}, {"probability", entry.probability}});
        }
        subsets.push_back(std::move(list));
    }
    return json{{"kind", "explicit"}, {"subsets", std::move(subsets)}};
}

AvailabilityModel read_availability(const json& obj, std::size_t n, std::size_t m) {
    const auto kind = get_as<std::string>(field(obj, "kind"), "availability.kind");
    if (kind == "pda") {
        return read_pda(obj, n, m);
    }
    if (kind == "explicit") {
        return read_explicit(obj, n, m);
    }
    if (kind == "sampler-seed") {
        const auto seed = get_as<std::uint64_t>(field(obj, "seed"), "availability.seed");
        const json& source = field(obj, "source");
        const auto source_kind = get_as<std::string>(field(source, "kind"), "availability.source.kind");
        if (source_kind == "pda") {
            return SamplerAvailability{seed, make_pda_source(read_pda(source, n, m))};
        }
        if (source_kind == "explicit") {
            return SamplerAvailability{seed, make_explicit_source(read_explicit(source, n, m))};
        }
        throw Error(ErrorCode::ParseError, "unknown sampler source kind '" + source_kind + "'");
    }
    throw Error(ErrorCode::ParseError, "unknown availability kind '" + kind + "'");
}

json write_availability(const AvailabilityModel& model) {
    if (const auto* pda = std::get_if<PdaAvailability>(&model)) {
        return write_pda(*pda);
    }
    if (const auto* table = std::get_if<ExplicitAvailability>(&model)) {
        return write_explicit(*table);
    }
    const auto& sampler = std::get<SamplerAvailability>(model);
    json source;
    if (sampler.source && sampler.source->as_pda()) {
        source = write_pda(*sampler.source->as_pda());
    } else if (sampler.source && sampler.source->as_explicit()) {
        source = write_explicit(*sampler.source->as_explicit());
    } else {
        throw Error(ErrorCode::UnsupportedModel, "an opaque sampler source cannot be serialized");
    }
    return json{{"kind", "sampler-seed"}, {"seed", sampler.seed}, {"source", std::move(source)}};
}

} // namespace

InstanceDocument parse_instance(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    InstanceDocument doc;
    const auto n = get_as<std::size_t>(field(root, "n_states"), "n_states");
    const auto m = get_as<std::size_t>(field(root, "n_actions"), "n_actions");
    doc.mdp.n_states = n;
    doc.mdp.n_actions = m;
    doc.mdp.discount = get_as<double>(field(root, "discount"), "discount");
    doc.mdp.rewards = read_matrix(field(root, "rewards"), n, m, "rewards");

    const json& transitions = field(root, "transitions");
    expect_array(transitions, n, "transitions");
    doc.mdp.transitions.reserve(n * m * n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto block = read_matrix(transitions[s], m, n, "transitions[" + std::to_string(s) + "]");
        doc.mdp.transitions.insert(doc.mdp.transitions.end(), block.begin(), block.end());
    }
    doc.availability = read_availability(field(root, "availability"), n, m);

    if (root.contains("state_names")) {
        doc.state_names = get_as<std::vector<std::string>>(root["state_names"], "state_names");
        if (doc.state_names.size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "state_names needs one name per state");
        }
    }
    if (root.contains("action_names")) {
        const json& names = root["action_names"];
        if (names.is_array() && !names.empty() && names.front().is_array()) {
            doc.action_names = get_as<std::vector<std::vector<std::string>>>(names, "action_names");
            if (doc.action_names.size() != n) {
                throw Error(ErrorCode::DimensionMismatch, "per-state action_names need one list per state");
            }
        } else {
            doc.action_names = {get_as<std::vector<std::string>>(names, "action_names")};
        }
        for (const auto& list : doc.action_names) {
            if (list.size() != m) {
                throw Error(ErrorCode::DimensionMismatch, "action_names need one name per action");
            }
        }
    }
    return doc;
}

std::string serialize_instance(const InstanceDocument& doc) {
    const BaseMdp& mdp = doc.mdp;
    json transitions = json::array();
    for (std::size_t s = 0; s < mdp.n_states; ++s) {
        json block = json::array();
        for (std::size_t k = 0; k < mdp.n_actions; ++k) {
            const auto row = mdp.transition_row(s, k);
            block.push_back(std::vector<double>(row.begin(), row.end()));
        }
        transitions.push_back(std::move(block));
    }
    json root = {
        {"n_states", mdp.n_states},
        {"n_actions", mdp.n_actions},
        {"discount", mdp.discount},
        {"rewards", write_matrix(mdp.rewards, mdp.n_states, mdp.n_actions)},
        {"transitions", std::move(transitions)},
        {"availability", write_availability(doc.availability)},
    };
    if (!doc.state_names.empty()) {
        root["state_names"] = doc.state_names;
    }
    if (doc.action_names.size() == 1) {
        root["action_names"] = doc.action_names.front();
    } else if (!doc.action_names.empty()) {
        root["action_names"] = doc.action_names;
    }
    return root.dump(2) + "\n";
}

InstanceDocument read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open instance file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

void write_instance_file(const std::string& path, const InstanceDocument& doc) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write instance file '" + path + "'");
    }
    out << serialize_instance(doc);
}

std::string state_name(const InstanceDocument& doc, StateIndex s) {
    return s < doc.state_names.size() ? doc.state_names[s] : "s" + std::to_string(s);
}

std::string action_name(const InstanceDocument& doc, StateIndex s, ActionIndex k) {
    if (doc.action_names.size() == 1) {
        return doc.action_names.front()[k];
    }
    if (s < doc.action_names.size()) {
        return doc.action_names[s][k];
    }
    return "a" + std::to_string(k);
}

std::string format_order(const InstanceDocument& doc, StateIndex s, std::span<const ActionIndex> order) {
    std::string out = "[";
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += action_name(doc, s, order[i]);
    }
    return out + "]";
}

} // namespace sas
