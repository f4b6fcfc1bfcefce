#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tembp/tem.hpp"

namespace tembp {

/// Spike-train text format:
///
///   # tem kappa=<k> delta=<d> bias=<b> bound=<c> window=<t0>,<t1>
///   <tag>,<spike_index>,<time_seconds>
///
/// Tags are A, B or S (single channel). Header values carry 17 significant
/// digits; spike times carry 12. All trains in one file share the header.
std::string channel_tag(Channel channel);
Channel parse_channel_tag(const std::string& tag);

void write_spike_file(std::ostream& out, std::span<const SpikeTrain> trains);
void write_spike_file(const std::filesystem::path& path,
                      std::span<const SpikeTrain> trains);

/// Trains in order of first appearance. Throws InvalidInput with the line
/// number on malformed input.
std::vector<SpikeTrain> read_spike_file(std::istream& in);
std::vector<SpikeTrain> read_spike_file(const std::filesystem::path& path);

}  // namespace tembp
