#include "ustlocal/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

Network read_network(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no)) throw ParseError("empty graph file");
  std::istringstream header(line);
  long n = 0, m = 0;
  if (!(header >> n >> m) || n < 1 || m < 0)
    throw ParseError("line " + std::to_string(line_no) + ": expected 'n m'");

  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    if (!next_content_line(in, line, line_no))
      throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    std::istringstream fields(line);
    long u = 0, v = 0;
    if (!(fields >> u >> v)) throw ParseError("line " + std::to_string(line_no) + ": expected 'u v [c]'");
    WeightedEdge e{static_cast<VertexId>(u), static_cast<VertexId>(v), 1.0};
    std::string token;
    if (fields >> token) {
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), e.conductance);
      if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad conductance '" + token + "'");
    }
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw VertexOutOfRange("line " + std::to_string(line_no));
    edges.push_back(e);
  }
  return Network::build(static_cast<VertexId>(n), edges);
}

Network read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_network(in);
}

void write_network(std::ostream& out, const Network& net) {
  out << net.vertex_count() << ' ' << net.edge_count() << '\n';
  for (const auto& e : net.edges()) {
    out << e.u << ' ' << e.v;
    if (e.conductance != 1.0) out << ' ' << format_double(e.conductance);
    out << '\n';
  }
}

std::string format_network(const Network& net) {
  std::ostringstream out;
  write_network(out, net);
  return out.str();
}

void write_network_file(const std::string& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_network(out, net);
}

}  // namespace ustlocal
