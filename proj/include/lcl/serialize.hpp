#pragma once

#include <string>
#include <utility>

#include "lcl/graph.hpp"

namespace lcl {

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& m) : std::runtime_error(m) {}
};

// Canonical text encoding of a graph plus its labeling layers. Node order is
// ascending id, edge order is insertion order, keys are sorted, so equal
// inputs encode byte-identically. See docs/format.md.
std::string encode(const PortedMultigraph& g, const Labeling& labels);

std::pair<PortedMultigraph, Labeling> decode(const std::string& bytes);

void save_graph(const std::string& path, const PortedMultigraph& g,
                const Labeling& labels);
std::pair<PortedMultigraph, Labeling> load_graph(const std::string& path);

}  // namespace lcl
