#pragma once

#include <iosfwd>
#include <string>

#include "iqbb/explicit_tree.hpp"

namespace iqbb {

// Text format, one node per line: `<path> <cost> <hcost> <child-count>`, with
// path "r" for the root. Lines starting with '#' and blank lines are ignored.
void write_tree(std::ostream& out, const ExplicitTree& tree);
ExplicitTree read_tree(std::istream& in);

void save_tree(const std::string& path, const ExplicitTree& tree);
ExplicitTree load_tree(const std::string& path);

}  // namespace iqbb
