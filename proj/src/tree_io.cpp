#include "iqbb/tree_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "iqbb/errors.hpp"

namespace iqbb {

void write_tree(std::ostream& out, const ExplicitTree& tree) {
  std::vector<const ExplicitNode*> order;
  order.reserve(tree.size());
  for (const ExplicitNode& n : tree.nodes()) order.push_back(&n);
  std::sort(order.begin(), order.end(),
            [](const ExplicitNode* a, const ExplicitNode* b) { return a->id < b->id; });
  out << "# path cost hcost children\n";
  for (const ExplicitNode* n : order) {
    out << n->id.to_string() << ' ' << n->cost << ' ' << n->hcost << ' ' << n->child_count << '\n';
  }
}

ExplicitTree read_tree(std::istream& in) {
  struct Row {
    NodeId id;
    Cost cost;
    Hcost hcost;
    int children;
  };
  std::vector<Row> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string path;
    Row row{};
    if (!(ls >> path >> row.cost >> row.hcost >> row.children)) {
      throw FormatError("tree line " + std::to_string(line_no) + ": expected 4 fields");
    }
    if (row.children < 0 || row.children > 2) {
      throw FormatError("tree line " + std::to_string(line_no) + ": child-count must be 0..2");
    }
    try {
      row.id = NodeId::parse(path);
    } catch (const std::exception& e) {
      throw FormatError("tree line " + std::to_string(line_no) + ": " + e.what());
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw FormatError("tree file has no nodes");
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
  if (!rows[0].id.is_root()) throw FormatError("tree file has no root line");
  ExplicitTree tree(rows[0].cost, rows[0].hcost);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (rows[i - 1].id == r.id) throw FormatError("duplicate node " + r.id.to_string());
    const auto parent = tree.index_of(r.id.parent());
    if (!parent) throw FormatError("node " + r.id.to_string() + " has no parent line");
    if (tree.node(*parent).child_count != r.id.bit(r.id.depth() - 1)) {
      throw FormatError("node " + r.id.to_string() + " skips a child index");
    }
    tree.add_child(*parent, r.cost, r.hcost);
  }
  for (const Row& r : rows) {
    if (tree.node(*tree.index_of(r.id)).child_count != r.children) {
      throw FormatError("node " + r.id.to_string() + " child-count mismatch");
    }
  }
  return tree;
}

void save_tree(const std::string& path, const ExplicitTree& tree) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_tree(out, tree);
}

ExplicitTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  return read_tree(in);
}

}  // namespace iqbb
