#include "cmanet/simd/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define CMANET_HAVE_AVX2_KERNELS 1
#include <immintrin.h>

#include <numbers>
#endif

namespace cmanet::simd {

#if CMANET_HAVE_AVX2_KERNELS

// Functions carry a target attribute instead of the whole file being built
// with -mavx2, so no AVX2 code can leak into shared inline functions.
#define CMANET_AVX2 __attribute__((target("avx2")))

namespace {

constexpr std::size_t kLanes = 4;

CMANET_AVX2 inline __m256d wrap_angle4(__m256d d) {
    const __m256d two_pi = _mm256_set1_pd(2.0 * std::numbers::pi);
    const __m256d zero = _mm256_setzero_pd();
    __m256d w = _mm256_sub_pd(d, _mm256_mul_pd(two_pi, _mm256_floor_pd(_mm256_div_pd(d, two_pi))));
    w = _mm256_blendv_pd(w, _mm256_add_pd(w, two_pi), _mm256_cmp_pd(w, zero, _CMP_LT_OQ));
    w = _mm256_blendv_pd(w, zero, _mm256_cmp_pd(w, two_pi, _CMP_NLT_UQ));
    return w;
}

CMANET_AVX2 inline __m256d gm_blend4(__m256d lambda, __m256d innovation, __m256d previous, __m256d mean,
                                     __m256d sigma, __m256d noise) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d memory = _mm256_add_pd(_mm256_mul_pd(lambda, previous),
                                         _mm256_mul_pd(_mm256_sub_pd(one, lambda), mean));
    return _mm256_add_pd(memory, _mm256_mul_pd(innovation, _mm256_mul_pd(sigma, noise)));
}

struct Fold4 {
    __m256d position;
    __m256d odd;  // all-ones lanes where the bounce count is odd
};

CMANET_AVX2 inline Fold4 fold4(__m256d x, __m256d length) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d q = _mm256_floor_pd(_mm256_div_pd(x, length));
    const __m256d m = _mm256_sub_pd(x, _mm256_mul_pd(q, length));
    const __m256d parity = _mm256_sub_pd(q, _mm256_mul_pd(two, _mm256_floor_pd(_mm256_div_pd(q, two))));
    const __m256d odd = _mm256_cmp_pd(parity, zero, _CMP_NEQ_UQ);
    __m256d r = _mm256_blendv_pd(m, _mm256_sub_pd(length, m), odd);
    r = _mm256_min_pd(_mm256_max_pd(r, zero), length);
    return {r, odd};
}

CMANET_AVX2 void gm_step_avx2(const GmStepBatch& b) {
    const std::size_t n = b.speed.size();
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d lambda = _mm256_loadu_pd(&b.lambda[i]);
        const __m256d innovation = _mm256_loadu_pd(&b.innovation[i]);

        __m256d s = gm_blend4(lambda, innovation, _mm256_loadu_pd(&b.speed[i]), _mm256_loadu_pd(&b.mean_speed[i]),
                              _mm256_loadu_pd(&b.speed_sigma[i]), _mm256_loadu_pd(&b.noise_speed[i]));
        s = _mm256_min_pd(_mm256_max_pd(s, zero), _mm256_loadu_pd(&b.max_speed[i]));
        _mm256_storeu_pd(&b.speed[i], s);

        const __m256d d =
            gm_blend4(lambda, innovation, _mm256_loadu_pd(&b.direction[i]), _mm256_loadu_pd(&b.mean_direction[i]),
                      _mm256_loadu_pd(&b.direction_sigma[i]), _mm256_loadu_pd(&b.noise_direction[i]));
        _mm256_storeu_pd(&b.direction[i], wrap_angle4(d));
    }
    if (i < n) {
        const std::size_t r = n - i;
        scalar_kernels().gm_step(GmStepBatch{
            b.speed.subspan(i, r), b.direction.subspan(i, r), b.lambda.subspan(i, r), b.innovation.subspan(i, r),
            b.mean_speed.subspan(i, r), b.mean_direction.subspan(i, r), b.speed_sigma.subspan(i, r),
            b.direction_sigma.subspan(i, r), b.max_speed.subspan(i, r), b.noise_speed.subspan(i, r),
            b.noise_direction.subspan(i, r)});
    }
}

CMANET_AVX2 void integrate_avx2(const IntegrateBatch& b) {
    const std::size_t n = b.x.size();
    const __m256d dt = _mm256_set1_pd(b.dt);
    const __m256d width = _mm256_set1_pd(b.width);
    const __m256d height = _mm256_set1_pd(b.height);
    const __m256d pi = _mm256_set1_pd(std::numbers::pi);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d speed = _mm256_loadu_pd(&b.speed[i]);
        const __m256d x = _mm256_add_pd(_mm256_loadu_pd(&b.x[i]),
                                        _mm256_mul_pd(_mm256_mul_pd(speed, _mm256_loadu_pd(&b.cos_direction[i])), dt));
        const __m256d y = _mm256_add_pd(_mm256_loadu_pd(&b.y[i]),
                                        _mm256_mul_pd(_mm256_mul_pd(speed, _mm256_loadu_pd(&b.sin_direction[i])), dt));
        const Fold4 fx = fold4(x, width);
        const Fold4 fy = fold4(y, height);
        _mm256_storeu_pd(&b.x[i], fx.position);
        _mm256_storeu_pd(&b.y[i], fy.position);

        __m256d d = _mm256_loadu_pd(&b.direction[i]);
        d = _mm256_blendv_pd(d, _mm256_sub_pd(pi, d), fx.odd);
        d = _mm256_blendv_pd(d, _mm256_sub_pd(zero, d), fy.odd);
        _mm256_storeu_pd(&b.direction[i], wrap_angle4(d));
    }
    if (i < n) {
        const std::size_t r = n - i;
        scalar_kernels().integrate(IntegrateBatch{b.x.subspan(i, r), b.y.subspan(i, r), b.direction.subspan(i, r),
                                                  b.speed.subspan(i, r), b.cos_direction.subspan(i, r),
                                                  b.sin_direction.subspan(i, r), b.dt, b.width, b.height});
    }
}

CMANET_AVX2 void range_query_avx2(const RangeQuery& q) {
    const std::size_t n = q.x.size();
    const __m256d px = _mm256_set1_pd(q.px);
    const __m256d py = _mm256_set1_pd(q.py);
    const __m256d r2 = _mm256_set1_pd(q.radius_sq);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&q.x[i]), px);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&q.y[i]), py);
        const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(&q.dist_sq[i], d2);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(d2, r2, _CMP_LE_OQ));
        for (std::size_t lane = 0; lane < kLanes; ++lane) q.within[i + lane] = (mask >> lane) & 1;
    }
    if (i < n) {
        const std::size_t r = n - i;
        scalar_kernels().range_query(RangeQuery{q.px, q.py, q.x.subspan(i, r), q.y.subspan(i, r), q.radius_sq,
                                                q.dist_sq.subspan(i, r), q.within.subspan(i, r)});
    }
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{"avx2", &gm_step_avx2, &integrate_avx2, &range_query_avx2};
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace cmanet::simd
