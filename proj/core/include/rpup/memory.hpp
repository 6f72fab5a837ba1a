#pragma once

#include <cstddef>
#include <memory_resource>

namespace rpup {

// Byte-exact allocation meter. Wrap it around the transform calls to audit the
// working-set contract: peak bytes here / sizeof(double) + the caller's block
// is the sample-equivalent footprint.
class CountingResource final : public std::pmr::memory_resource {
public:
  explicit CountingResource(
      std::pmr::memory_resource* upstream = std::pmr::get_default_resource())
      : upstream_(upstream) {}

  std::size_t live_bytes() const noexcept { return live_; }
  std::size_t peak_bytes() const noexcept { return peak_; }
  void reset_peak() noexcept { peak_ = live_; }

private:
  void* do_allocate(std::size_t bytes, std::size_t align) override {
    void* p = upstream_->allocate(bytes, align);
    live_ += bytes;
    if (live_ > peak_) peak_ = live_;
    return p;
  }
  void do_deallocate(void* p, std::size_t bytes, std::size_t align) override {
    live_ -= bytes;
    upstream_->deallocate(p, bytes, align);
  }
  bool do_is_equal(const std::pmr::memory_resource& other) const noexcept override {
    return this == &other;
  }

  std::pmr::memory_resource* upstream_;
  std::size_t live_ = 0;
  std::size_t peak_ = 0;
};

}  // namespace rpup
