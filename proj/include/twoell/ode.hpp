#pragma once

// Adaptive eighth-order Dormand-Prince integrator (DOP853 of Hairer & Wanner)
// for small fixed-size systems. Templated on the scalar type so the same
// kernel runs in double and in float128 when a result is ill-conditioned.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <cstdlib>
#include <sstream>
#include <type_traits>

#include "errors.hpp"

namespace twoell::ode {

template <class Real, std::size_t N>
using vec = std::array<Real, N>;

template <class Real>
struct options {
    Real rtol = Real(1e-10);
    Real atol = Real(1e-10);
    Real h_max = Real(0);  // 0 means unbounded
    std::size_t max_steps = 2'000'000;
};

struct no_observer {
    template <class Real, class Y>
    void operator()(Real, const Y&) const noexcept {}
};

namespace dop853 {

// Node, coupling, weight and error coefficients of Hairer's DOP853, kept as
// decimal strings with 30 digits so that float128 runs are not limited by
// double-rounded coefficients.
#define TWOELL_DOP853_COEFFICIENTS(X) \
    X(c2, "0.526001519587677318785587544488e-01") \
    X(c3, "0.789002279381515978178381316732e-01") \
    X(c4, "0.118350341907227396726757197510e+00") \
    X(c5, "0.281649658092772603273242802490e+00") \
    X(c6, "0.333333333333333333333333333333e+00") \
    X(c7, "0.25e+00") \
    X(c8, "0.307692307692307692307692307692e+00") \
    X(c9, "0.651282051282051282051282051282e+00") \
    X(c10, "0.6e+00") \
    X(c11, "0.857142857142857142857142857142e+00") \
    X(a21, "5.26001519587677318785587544488e-2") \
    X(a31, "1.97250569845378994544595329183e-2") \
    X(a32, "5.91751709536136983633785987549e-2") \
    X(a41, "2.95875854768068491816892993775e-2") \
    X(a43, "8.87627564304205475450678981324e-2") \
    X(a51, "2.41365134159266685502369798665e-1") \
    X(a53, "-8.84549479328286085344864962717e-1") \
    X(a54, "9.24834003261792003115737966543e-1") \
    X(a61, "3.7037037037037037037037037037e-2") \
    X(a64, "1.70828608729473871279604482173e-1") \
    X(a65, "1.25467687566822425016691814123e-1") \
    X(a71, "3.7109375e-2") \
    X(a74, "1.70252211019544039314978060272e-1") \
    X(a75, "6.02165389804559606850219397283e-2") \
    X(a76, "-1.7578125e-2") \
    X(a81, "3.70920001185047927108779319836e-2") \
    X(a84, "1.70383925712239993810214054705e-1") \
    X(a85, "1.07262030446373284651809199168e-1") \
    X(a86, "-1.53194377486244017527936158236e-2") \
    X(a87, "8.27378916381402288758473766002e-3") \
    X(a91, "6.24110958716075717114429577812e-1") \
    X(a94, "-3.36089262944694129406857109825e0") \
    X(a95, "-8.68219346841726006818189891453e-1") \
    X(a96, "2.75920996994467083049415600797e1") \
    X(a97, "2.01540675504778934086186788979e1") \
    X(a98, "-4.34898841810699588477366255144e1") \
    X(a101, "4.77662536438264365890433908527e-1") \
    X(a104, "-2.48811461997166764192642586468e0") \
    X(a105, "-5.90290826836842996371446475743e-1") \
    X(a106, "2.12300514481811942347288949897e1") \
    X(a107, "1.52792336328824235832596922938e1") \
    X(a108, "-3.32882109689848629194453265587e1") \
    X(a109, "-2.03312017085086261358222928593e-2") \
    X(a111, "-9.3714243008598732571704021658e-1") \
    X(a114, "5.18637242884406370830023853209e0") \
    X(a115, "1.09143734899672957818500254654e0") \
    X(a116, "-8.14978701074692612513997267357e0") \
    X(a117, "-1.85200656599969598641566180701e1") \
    X(a118, "2.27394870993505042818970056734e1") \
    X(a119, "2.49360555267965238987089396762e0") \
    X(a1110, "-3.0467644718982195003823669022e0") \
    X(a121, "2.27331014751653820792359768449e0") \
    X(a124, "-1.05344954667372501984066689879e1") \
    X(a125, "-2.00087205822486249909675718444e0") \
    X(a126, "-1.79589318631187989172765950534e1") \
    X(a127, "2.79488845294199600508499808837e1") \
    X(a128, "-2.85899827713502369474065508674e0") \
    X(a129, "-8.87285693353062954433549289258e0") \
    X(a1210, "1.23605671757943030647266201528e1") \
    X(a1211, "6.43392746015763530355970484046e-1") \
    X(b1, "5.42937341165687622380535766363e-2") \
    X(b6, "4.45031289275240888144113950566e0") \
    X(b7, "1.89151789931450038304281599044e0") \
    X(b8, "-5.8012039600105847814672114227e0") \
    X(b9, "3.1116436695781989440891606237e-1") \
    X(b10, "-1.52160949662516078556178806805e-1") \
    X(b11, "2.01365400804030348374776537501e-1") \
    X(b12, "4.47106157277725905176885569043e-2") \
    X(bhh1, "0.244094488188976377952755905512e+00") \
    X(bhh2, "0.733846688281611857341361741547e+00") \
    X(bhh3, "0.220588235294117647058823529412e-01") \
    X(er1, "0.1312004499419488073250102996e-01") \
    X(er6, "-0.1225156446376204440720569753e+01") \
    X(er7, "-0.4957589496572501915214079952e+00") \
    X(er8, "0.1664377182454986536961530415e+01") \
    X(er9, "-0.3503288487499736816886487290e+00") \
    X(er10, "0.3341791187130174790297318841e+00") \
    X(er11, "0.8192320648511571246570742613e-01") \
    X(er12, "-0.2235530786388629525884427845e-01")

template <class Real>
Real parse(const char* text) {
    if constexpr (std::is_floating_point_v<Real>)
        return static_cast<Real>(std::strtold(text, nullptr));
    else
        return Real(text);
}

template <class Real>
struct tableau {
#define TWOELL_DECLARE(name, text) Real name = parse<Real>(text);
    TWOELL_DOP853_COEFFICIENTS(TWOELL_DECLARE)
#undef TWOELL_DECLARE
};

template <class Real>
const tableau<Real>& coefficients() {
    static const tableau<Real> t;
    return t;
}

}  // namespace dop853

/// Integrates y' = f(t, y) from t0 to t1 in place. The observer is called
/// with (t, y) after every accepted step, including the final one at t1.
/// Returns the number of accepted steps.
template <class Real, std::size_t N, class Rhs, class Observer = no_observer>
std::size_t integrate(Rhs&& f, Real t0, Real t1, vec<Real, N>& y, const options<Real>& opt,
                      Observer&& observe = {}) {
    using std::abs;
    using std::max;
    using std::min;
    using std::pow;
    using std::sqrt;
    const auto& c = dop853::coefficients<Real>();

    if (t1 == t0) return 0;
    const Real dir = t1 > t0 ? Real(1) : Real(-1);
    const Real span = abs(t1 - t0);
    const Real eps = std::numeric_limits<Real>::epsilon();

    auto scale = [&](const vec<Real, N>& a, const vec<Real, N>& b, std::size_t i) {
        return opt.atol + opt.rtol * max(abs(a[i]), abs(b[i]));
    };

    vec<Real, N> k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, yw, ynew;
    f(t0, y, k1);

    // Starting step (Hairer's hinit, order 8).
    Real h;
    {
        Real dnf = 0, dny = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const Real sk = opt.atol + opt.rtol * abs(y[i]);
            dnf += (k1[i] / sk) * (k1[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        h = (dnf <= Real(1e-10) || dny <= Real(1e-10)) ? Real(1e-6) : sqrt(dny / dnf) * Real(0.01);
        h = min(h, span);
        if (opt.h_max > 0) h = min(h, opt.h_max);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + dir * h * k1[i];
        f(t0 + dir * h, yw, k2);
        Real der2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const Real sk = opt.atol + opt.rtol * abs(y[i]);
            const Real d = (k2[i] - k1[i]) / sk;
            der2 += d * d;
        }
        der2 = sqrt(der2) / h;
        const Real der12 = max(abs(der2), sqrt(dnf));
        const Real h1 = der12 <= Real(1e-15) ? max(Real(1e-6), abs(h) * Real(1e-3))
                                             : pow(Real(0.01) / der12, Real(1) / Real(8));
        h = min(Real(100) * h, h1);
        h = min(h, span);
        if (opt.h_max > 0) h = min(h, opt.h_max);
    }

    Real t = t0;
    bool last_rejected = false;
    std::size_t accepted = 0;
    std::size_t attempts = 0;

    while (true) {
        const Real remaining = abs(t1 - t);
        bool last = false;
        if (h >= remaining * (Real(1) - Real(8) * eps)) {
            h = remaining;
            last = true;
        }
        if (h <= Real(16) * eps * max(abs(t), Real(1))) {
            std::ostringstream msg;
            msg << "integrator step size underflow at t = " << static_cast<double>(t);
            throw step_underflow_error(msg.str());
        }
        if (++attempts > opt.max_steps) throw step_underflow_error("integrator exceeded its step budget");

        const Real hs = dir * h;
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * c.a21 * k1[i];
        f(t + c.c2 * hs, yw, k2);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * (c.a31 * k1[i] + c.a32 * k2[i]);
        f(t + c.c3 * hs, yw, k3);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * (c.a41 * k1[i] + c.a43 * k3[i]);
        f(t + c.c4 * hs, yw, k4);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a51 * k1[i] + c.a53 * k3[i] + c.a54 * k4[i]);
        f(t + c.c5 * hs, yw, k5);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a61 * k1[i] + c.a64 * k4[i] + c.a65 * k5[i]);
        f(t + c.c6 * hs, yw, k6);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a71 * k1[i] + c.a74 * k4[i] + c.a75 * k5[i] +
                                 c.a76 * k6[i]);
        f(t + c.c7 * hs, yw, k7);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a81 * k1[i] + c.a84 * k4[i] + c.a85 * k5[i] +
                                 c.a86 * k6[i] + c.a87 * k7[i]);
        f(t + c.c8 * hs, yw, k8);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a91 * k1[i] + c.a94 * k4[i] + c.a95 * k5[i] +
                                 c.a96 * k6[i] + c.a97 * k7[i] + c.a98 * k8[i]);
        f(t + c.c9 * hs, yw, k9);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a101 * k1[i] + c.a104 * k4[i] + c.a105 * k5[i] +
                                 c.a106 * k6[i] + c.a107 * k7[i] + c.a108 * k8[i] +
                                 c.a109 * k9[i]);
        f(t + c.c10 * hs, yw, k10);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a111 * k1[i] + c.a114 * k4[i] + c.a115 * k5[i] +
                                 c.a116 * k6[i] + c.a117 * k7[i] + c.a118 * k8[i] +
                                 c.a119 * k9[i] + c.a1110 * k10[i]);
        f(t + c.c11 * hs, yw, k11);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (c.a121 * k1[i] + c.a124 * k4[i] + c.a125 * k5[i] +
                                 c.a126 * k6[i] + c.a127 * k7[i] + c.a128 * k8[i] +
                                 c.a129 * k9[i] + c.a1210 * k10[i] + c.a1211 * k11[i]);
        f(t + hs, yw, k12);

        Real err3 = 0, err5 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const Real incr = c.b1 * k1[i] + c.b6 * k6[i] + c.b7 * k7[i] +
                              c.b8 * k8[i] + c.b9 * k9[i] + c.b10 * k10[i] +
                              c.b11 * k11[i] + c.b12 * k12[i];
            ynew[i] = y[i] + hs * incr;
            const Real sk = scale(y, ynew, i);
            const Real e3 = incr - c.bhh1 * k1[i] - c.bhh2 * k9[i] - c.bhh3 * k12[i];
            const Real e5 = c.er1 * k1[i] + c.er6 * k6[i] + c.er7 * k7[i] +
                            c.er8 * k8[i] + c.er9 * k9[i] + c.er10 * k10[i] +
                            c.er11 * k11[i] + c.er12 * k12[i];
            err3 += (e3 / sk) * (e3 / sk);
            err5 += (e5 / sk) * (e5 / sk);
        }
        Real deno = err5 + Real(0.01) * err3;
        if (deno <= 0) deno = 1;
        const Real err = h * err5 / sqrt(Real(N) * deno);

        const Real fac11 = err > 0 ? Real(pow(err, Real(0.125))) : Real(0);
        if (err <= 1) {
            ++accepted;
            t = last ? t1 : t + hs;
            y = ynew;
            f(t, y, k1);
            observe(t, y);
            if (last) return accepted;
            Real fac = max(Real(1) / Real(6), min(Real(1) / Real(0.333), fac11 / Real(0.9)));
            Real hnew = h / fac;
            if (last_rejected) hnew = min(hnew, h);
            if (opt.h_max > 0) hnew = min(hnew, opt.h_max);
            h = hnew;
            last_rejected = false;
        } else {
            h = h / min(Real(1) / Real(0.333), fac11 / Real(0.9));
            last_rejected = true;
        }
    }
}

}  // namespace twoell::ode
