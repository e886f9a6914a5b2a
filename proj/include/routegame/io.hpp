#pragma once

#include <string>
#include <vector>

#include "routegame/network.hpp"

namespace routegame {

struct NetworkBundle {
    Network network;
    DemandSpec demand;
    std::vector<std::string> warnings;
};

// Parse and validate a network document (see README for the schema).
NetworkBundle parse_network(const std::string& json_text);

// Same, reading from a file. Throws ParseError if the file cannot be read.
NetworkBundle load_network(const std::string& path);

// Inverse of parse_network: emits a document that loads back to an
// identical network and demand.
std::string serialize_network(const Network& net, const DemandSpec& demand);

} // namespace routegame
