#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fitpa/errors.hpp"
#include "fitpa/temporal_net.hpp"

namespace fitpa {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

template <typename T>
T parse_int(std::string_view s, std::size_t line_no, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line_no);
  }
  return v;
}

}  // namespace

void write_network(std::ostream& out, const TemporalNetwork& net,
                   const std::vector<std::string>& comments) {
  out << "#resolution=" << to_string(net.resolution()) << "\tdirected=" << (net.directed() ? 1 : 0);
  if (net.origin_year()) out << "\torigin=" << *net.origin_year();
  out << '\n';
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const auto& n : net.nodes()) {
    out << (n.selectable ? 'N' : 'S') << '\t' << n.id << '\t' << n.birth_time << '\t' << n.label << '\n';
  }
  for (const auto& n : net.nodes()) {
    if (const auto d = net.initial_degree(n.id); d != 0) out << "D\t" << n.id << '\t' << d << '\n';
  }
  for (const auto& e : net.events()) {
    out << "E\t" << e.time << '\t' << e.source << '\t' << e.target << '\n';
  }
}

TemporalNetwork read_network(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty network file", 0);
  ++line_no;
  if (line.rfind("#resolution=", 0) != 0) throw ParseError("missing #resolution header", line_no);

  Resolution resolution = Resolution::step;
  std::optional<bool> directed;
  std::optional<int> origin;
  for (auto field : split_tabs(std::string_view(line).substr(1))) {
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw ParseError("bad header field", line_no);
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    try {
      if (key == "resolution") {
        resolution = parse_resolution(value);
      } else if (key == "directed") {
        if (value != "0" && value != "1") throw ParseError("directed must be 0 or 1", line_no);
        directed = value == "1";
      } else if (key == "origin") {
        origin = parse_int<int>(value, line_no, "origin year");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!directed) throw ParseError("missing directed= in header", line_no);

  TemporalNetwork net(resolution, *directed);
  net.set_origin_year(origin);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_tabs(line);
    try {
      if (f[0] == "N" || f[0] == "S") {
        if (f.size() != 4) throw ParseError("node line needs 4 fields", line_no);
        const auto id = parse_int<NodeId>(f[1], line_no, "node id");
        const auto birth = parse_int<Time>(f[2], line_no, "birth time");
        if (id != net.node_count()) throw ParseError("node ids must be dense and ascending", line_no);
        if (f[0] == "N") {
          if (net.find(f[3])) throw ParseError("duplicate node label '" + std::string(f[3]) + "'", line_no);
          net.add_node(f[3], birth);
        } else {
          net.add_source_node(f[3], birth);
        }
      } else if (f[0] == "D") {
        if (f.size() != 3) throw ParseError("degree line needs 3 fields", line_no);
        net.set_initial_degree(parse_int<NodeId>(f[1], line_no, "node id"),
                               parse_int<std::int64_t>(f[2], line_no, "degree"));
      } else if (f[0] == "E") {
        if (f.size() != 4) throw ParseError("event line needs 4 fields", line_no);
        net.add_event(parse_int<Time>(f[1], line_no, "time"), parse_int<NodeId>(f[2], line_no, "source"),
                      parse_int<NodeId>(f[3], line_no, "target"));
      } else {
        throw ParseError("unknown record type '" + std::string(f[0]) + "'", line_no);
      }
    } catch (const NetworkError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return net;
}

void save_network(const std::string& path, const TemporalNetwork& net,
                  const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_network(out, net, comments);
}

TemporalNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_network(in);
}

}  // namespace fitpa
