#include "hdgoc/kernels.hpp"

#include "hdgoc/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace hdgoc::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, "scalar", &scalar::weighted_dot, &scalar::weighted_gram};
#if defined(HDGOC_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, "avx2", &avx2::weighted_dot, &avx2::weighted_gram};
#endif

bool cpu_has_avx2()
{
#if defined(HDGOC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<const KernelTable*>& current()
{
    static std::atomic<const KernelTable*> ptr{&table(detect())};
    return ptr;
}

} // namespace

bool available(Isa isa)
{
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
        return cpu_has_avx2();
    }
    return false;
}

Isa detect()
{
    if (const char* env = std::getenv("HDGOC_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") {
            return Isa::Scalar;
        }
        if (want == "avx2" && available(Isa::Avx2)) {
            return Isa::Avx2;
        }
    }
    return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

const KernelTable& table(Isa isa)
{
    if (!available(isa)) {
        throw InvalidArgument("kernel variant '" + std::string(name(isa)) + "' is not available on this CPU");
    }
#if defined(HDGOC_HAVE_AVX2)
    if (isa == Isa::Avx2) {
        return kAvx2;
    }
#endif
    return kScalar;
}

const KernelTable& active()
{
    return *current().load(std::memory_order_acquire);
}

void select(Isa isa)
{
    current().store(&table(isa), std::memory_order_release);
}

std::string_view name(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

} // namespace hdgoc::kernels
