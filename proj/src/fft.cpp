#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace lspde::fft {

namespace {

struct Buffer {
    explicit Buffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {}
    ~Buffer() { fftw_free(ptr); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;
    fftw_complex* ptr;
};

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    // FFTW's planner is not reentrant; execution via fftw_execute_dft is.
    fftw_plan get(const std::vector<int>& shape, int sign)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(shape, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::size_t n = 1;
        for (int s : shape) n *= static_cast<std::size_t>(s);
        Buffer scratch(n);
        fftw_plan plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch.ptr,
                                       scratch.ptr, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                       FFTW_ESTIMATE);
        plans_.emplace(std::move(key), plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

}  // namespace

void transform(std::vector<std::complex<double>>& data, const std::vector<int>& shape, int sign)
{
    fftw_plan plan = cache().get(shape, sign);
    // Always execute on fftw-allocated memory so the alignment matches the plan.
    Buffer buf(data.size());
    auto* raw = reinterpret_cast<std::complex<double>*>(buf.ptr);
    std::copy(data.begin(), data.end(), raw);
    fftw_execute_dft(plan, buf.ptr, buf.ptr);
    std::copy(raw, raw + data.size(), data.begin());
}

}  // namespace lspde::fft
