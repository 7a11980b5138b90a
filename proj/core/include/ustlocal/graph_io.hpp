#pragma once

#include <iosfwd>
#include <string>

#include "ustlocal/network.hpp"

namespace ustlocal {

// Text format: first line "n m", then m lines "u v [c]". The conductance is
// optional (default 1) and is written only when it differs from 1, using the
// shortest decimal that round-trips. Blank lines and '#' comments are skipped.

Network read_network(std::istream& in);  // throws ParseError plus build errors
Network read_network_file(const std::string& path);
void write_network(std::ostream& out, const Network& net);
std::string format_network(const Network& net);
void write_network_file(const std::string& path, const Network& net);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace ustlocal
