#include "ocd/core.hpp"

#include "ocd/error.hpp"

#include <numeric>
#include <string>

namespace ocd {

BlockPartition::BlockPartition(int n, std::vector<int> sizes)
    : n_(n), sizes_(std::move(sizes)) {
  if (n_ <= 0) fail(Status::invalid_argument, "partition dimension must be positive");
  if (sizes_.empty()) fail(Status::invalid_argument, "partition needs at least one block");
  long total = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] <= 0) {
      fail(Status::invalid_argument,
           "block size must be positive (block " + std::to_string(i + 1) + ")");
    }
    total += sizes_[i];
  }
  if (total != n_) {
    fail(Status::invalid_argument,
         "block sizes sum to " + std::to_string(total) + ", expected " + std::to_string(n_));
  }
  offsets_.resize(sizes_.size());
  offsets_[0] = 0;
  for (std::size_t i = 1; i < sizes_.size(); ++i) {
    offsets_[i] = offsets_[i - 1] + sizes_[i - 1];
  }
}

BlockPartition BlockPartition::uniform(int n, int blocks) {
  if (blocks <= 0) fail(Status::invalid_argument, "block count must be positive");
  if (n <= 0 || n % blocks != 0) {
    fail(Status::invalid_argument,
         "uniform partition requires the block count to divide the dimension (" +
             std::to_string(blocks) + " blocks, dimension " + std::to_string(n) + ")");
  }
  return BlockPartition(n, std::vector<int>(blocks, n / blocks));
}

int BlockPartition::check_index(int block) const {
  if (block < 1 || block > blocks()) {
    fail(Status::invalid_argument,
         "block index " + std::to_string(block) + " out of range 1.." + std::to_string(blocks()));
  }
  return block;
}

Vector BlockPartition::extract(int block, const Vector& v) const {
  check_index(block);
  if (v.size() != n_) {
    fail(Status::invalid_argument,
         "vector length " + std::to_string(v.size()) + " does not match dimension " +
             std::to_string(n_));
  }
  return v.segment(offset(block), size(block));
}

Vector BlockPartition::embed(int block, const Vector& u) const {
  check_index(block);
  if (u.size() != size(block)) {
    fail(Status::invalid_argument,
         "block vector length " + std::to_string(u.size()) + " does not match block size " +
             std::to_string(size(block)));
  }
  Vector out = Vector::Zero(n_);
  out.segment(offset(block), size(block)) = u;
  return out;
}

}  // namespace ocd
