#include "tembp/spike_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tembp/error.hpp"

namespace tembp {

namespace {

std::string format_number(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double parse_double(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidInput("spike file line " + std::to_string(line) +
                       ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

std::string channel_tag(Channel channel) {
  switch (channel) {
    case Channel::a:
      return "A";
    case Channel::b:
      return "B";
    case Channel::single:
      break;
  }
  return "S";
}

Channel parse_channel_tag(const std::string& tag) {
  if (tag == "A") return Channel::a;
  if (tag == "B") return Channel::b;
  if (tag == "S") return Channel::single;
  throw InvalidInput("unknown channel tag '" + tag + "'");
}

void write_spike_file(std::ostream& out, std::span<const SpikeTrain> trains) {
  if (trains.empty()) {
    throw InvalidInput("write_spike_file: no trains");
  }
  const TemParams& p = trains.front().params;
  const TimeWindow& w = trains.front().window;
  out << "# tem kappa=" << format_number("%.17g", p.kappa)
      << " delta=" << format_number("%.17g", p.delta)
      << " bias=" << format_number("%.17g", p.bias)
      << " bound=" << format_number("%.17g", p.bound)
      << " window=" << format_number("%.17g", w.start) << ','
      << format_number("%.17g", w.end) << '\n';
  for (const SpikeTrain& train : trains) {
    const std::string tag = channel_tag(train.channel);
    for (std::size_t k = 0; k < train.times.size(); ++k) {
      out << tag << ',' << k << ',' << format_number("%.12g", train.times[k]) << '\n';
    }
  }
}

void write_spike_file(const std::filesystem::path& path,
                      std::span<const SpikeTrain> trains) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidInput("cannot open " + path.string() + " for writing");
  }
  write_spike_file(out, trains);
}

std::vector<SpikeTrain> read_spike_file(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line.rfind("# tem ", 0) != 0) {
    throw InvalidInput("spike file line 1: missing '# tem' header");
  }
  TemParams params;
  TimeWindow window;
  int seen = 0;
  std::istringstream header(line.substr(6));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("spike file line 1: bad header field '" + field + "'");
    }
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "kappa") {
      params.kappa = parse_double(value, lineno);
    } else if (key == "delta") {
      params.delta = parse_double(value, lineno);
    } else if (key == "bias") {
      params.bias = parse_double(value, lineno);
    } else if (key == "bound") {
      params.bound = parse_double(value, lineno);
    } else if (key == "window") {
      const auto comma = value.find(',');
      if (comma == std::string::npos) {
        throw InvalidInput("spike file line 1: window needs start,end");
      }
      window.start = parse_double(value.substr(0, comma), lineno);
      window.end = parse_double(value.substr(comma + 1), lineno);
    } else {
      throw InvalidInput("spike file line 1: unknown header key '" + key + "'");
    }
    ++seen;
  }
  if (seen != 5) {
    throw InvalidInput("spike file line 1: header needs kappa, delta, bias, bound, window");
  }

  std::vector<SpikeTrain> trains;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw InvalidInput("spike file line " + std::to_string(lineno) +
                         ": expected tag,index,time");
    }
    const Channel ch = parse_channel_tag(line.substr(0, c1));
    const double index = parse_double(line.substr(c1 + 1, c2 - c1 - 1), lineno);
    const double t = parse_double(line.substr(c2 + 1), lineno);

    SpikeTrain* train = nullptr;
    for (auto& tr : trains) {
      if (tr.channel == ch) {
        train = &tr;
      }
    }
    if (train == nullptr) {
      trains.push_back(SpikeTrain{{}, ch, params, window});
      train = &trains.back();
    }
    if (index != static_cast<double>(train->times.size())) {
      throw InvalidInput("spike file line " + std::to_string(lineno) +
                         ": spike indices must count up from 0");
    }
    if (!train->times.empty() && !(t > train->times.back())) {
      throw InvalidInput("spike file line " + std::to_string(lineno) +
                         ": spike times must strictly increase");
    }
    train->times.push_back(t);
  }
  return trains;
}

std::vector<SpikeTrain> read_spike_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInput("cannot open " + path.string());
  }
  return read_spike_file(in);
}

}  // namespace tembp
