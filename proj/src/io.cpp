#include "routegame/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace routegame {

namespace {

using nlohmann::ordered_json;

double number_field(const ordered_json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ParseError(where + ": missing field \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw ParseError(where + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

std::string string_field(const ordered_json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ParseError(where + ": missing field \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_string())
        throw ParseError(where + ": field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

int node_field(const Network& net, const ordered_json& obj, const char* key,
               const std::string& where) {
    const std::string name = string_field(obj, key, where);
    int idx = net.node_index(name);
    if (idx < 0)
        throw ValidationError(where + ": unknown node \"" + name + "\"");
    return idx;
}

} // namespace

NetworkBundle parse_network(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("document root must be an object");
    for (const char* key : {"nodes", "links", "od_pairs"}) {
        if (!doc.contains(key) || !doc.at(key).is_array())
            throw ParseError(std::string("missing or non-array field \"") + key + "\"");
    }

    NetworkBundle bundle;
    Network& net = bundle.network;
    for (const auto& n : doc.at("nodes")) {
        if (!n.is_string()) throw ParseError("node identifiers must be strings");
        net.nodes.push_back(n.get<std::string>());
    }

    int index = 0;
    for (const auto& item : doc.at("links")) {
        std::ostringstream where;
        where << "links[" << index++ << "]";
        if (!item.is_object()) throw ParseError(where.str() + ": must be an object");
        Link link;
        if (!item.contains("id") || !item.at("id").is_number_integer())
            throw ParseError(where.str() + ": field \"id\" must be an integer");
        link.id = item.at("id").get<int>();
        link.tail = node_field(net, item, "from", where.str());
        link.head = node_field(net, item, "to", where.str());
        link.params.free_flow = number_field(item, "a", where.str());
        link.params.congestion = number_field(item, "gamma", where.str());
        link.params.exponent = number_field(item, "beta", where.str());
        link.params.cap_regular = number_field(item, "m", where.str());
        link.params.cap_autonomous = number_field(item, "M", where.str());
        net.links.push_back(link);
    }

    index = 0;
    for (const auto& item : doc.at("od_pairs")) {
        std::ostringstream where;
        where << "od_pairs[" << index++ << "]";
        if (!item.is_object()) throw ParseError(where.str() + ": must be an object");
        OdPair od;
        od.origin = node_field(net, item, "origin", where.str());
        od.destination = node_field(net, item, "destination", where.str());
        net.od_pairs.push_back(od);
        bundle.demand.rates.push_back(number_field(item, "r", where.str()));
        bundle.demand.autonomy.push_back(number_field(item, "alpha", where.str()));
    }

    validate(net, bundle.demand, &bundle.warnings);
    return bundle;
}

NetworkBundle load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

std::string serialize_network(const Network& net, const DemandSpec& demand) {
    ordered_json doc;
    doc["nodes"] = net.nodes;
    doc["links"] = ordered_json::array();
    for (const Link& l : net.links) {
        ordered_json item;
        item["id"] = l.id;
        item["from"] = net.nodes[l.tail];
        item["to"] = net.nodes[l.head];
        item["a"] = l.params.free_flow;
        item["gamma"] = l.params.congestion;
        item["beta"] = l.params.exponent;
        item["m"] = l.params.cap_regular;
        item["M"] = l.params.cap_autonomous;
        doc["links"].push_back(item);
    }
    doc["od_pairs"] = ordered_json::array();
    for (std::size_t w = 0; w < net.od_pairs.size(); ++w) {
        ordered_json item;
        item["origin"] = net.nodes[net.od_pairs[w].origin];
        item["destination"] = net.nodes[net.od_pairs[w].destination];
        item["r"] = demand.rates[w];
        item["alpha"] = demand.autonomy[w];
        doc["od_pairs"].push_back(item);
    }
    return doc.dump(2) + "\n";
}

} // namespace routegame
