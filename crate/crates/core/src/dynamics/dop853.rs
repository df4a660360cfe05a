//! Dormand–Prince 8(5,3) embedded Runge–Kutta pair with 7th-order dense
//! output, after Hairer, Nørsett & Wanner's DOP853. Specialised to
//! autonomous systems on a fixed 6-dimensional state (position, velocity).
#![allow(clippy::excessive_precision, clippy::unreadable_literal)]

pub(crate) type State6 = [f64; 6];

/// y + h Σ wᵢ kᵢ
fn combine(y: &State6, h: f64, terms: &[(f64, &State6)]) -> State6 {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for (w, k) in terms {
            s += w * k[i];
        }
        *o += h * s;
    }
    out
}

fn weighted(terms: &[(f64, &State6)]) -> State6 {
    combine(&[0.0; 6], 1.0, terms)
}

pub(crate) struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

/// The outcome of one trial step from (y, k1 = f(y)) with step h.
pub(crate) struct Trial {
    pub h: f64,
    pub y_new: State6,
    /// Scaled error norm; the step is acceptable iff `err <= 1`.
    pub err: f64,
    k: [State6; 12],
}

pub(crate) fn trial<F: Fn(&State6) -> State6>(f: &F, y: &State6, k1: &State6, h: f64, tol: &Tolerances) -> Trial {
    let k2 = f(&combine(y, h, &[(A21, k1)]));
    let k3 = f(&combine(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(&combine(y, h, &[(A41, k1), (A43, &k3)]));
    let k5 = f(&combine(y, h, &[(A51, k1), (A53, &k3), (A54, &k4)]));
    let k6 = f(&combine(y, h, &[(A61, k1), (A64, &k4), (A65, &k5)]));
    let k7 = f(&combine(y, h, &[(A71, k1), (A74, &k4), (A75, &k5), (A76, &k6)]));
    let k8 = f(&combine(
        y,
        h,
        &[(A81, k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)],
    ));
    let k9 = f(&combine(
        y,
        h,
        &[(A91, k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)],
    ));
    let k10 = f(&combine(
        y,
        h,
        &[
            (A101, k1),
            (A104, &k4),
            (A105, &k5),
            (A106, &k6),
            (A107, &k7),
            (A108, &k8),
            (A109, &k9),
        ],
    ));
    let k11 = f(&combine(
        y,
        h,
        &[
            (A111, k1),
            (A114, &k4),
            (A115, &k5),
            (A116, &k6),
            (A117, &k7),
            (A118, &k8),
            (A119, &k9),
            (A1110, &k10),
        ],
    ));
    let k12 = f(&combine(
        y,
        h,
        &[
            (A121, k1),
            (A124, &k4),
            (A125, &k5),
            (A126, &k6),
            (A127, &k7),
            (A128, &k8),
            (A129, &k9),
            (A1210, &k10),
            (A1211, &k11),
        ],
    ));
    let y_new = combine(
        y,
        h,
        &[
            (B1, k1),
            (B6, &k6),
            (B7, &k7),
            (B8, &k8),
            (B9, &k9),
            (B10, &k10),
            (B11, &k11),
            (B12, &k12),
        ],
    );
    let slope = weighted(&[
        (B1, k1),
        (B6, &k6),
        (B7, &k7),
        (B8, &k8),
        (B9, &k9),
        (B10, &k10),
        (B11, &k11),
        (B12, &k12),
    ]);

    let mut err = 0.0;
    let mut err2 = 0.0;
    for i in 0..6 {
        let sk = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
        let e5 = slope[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
        err2 += (e5 / sk).powi(2);
        let e8 = ER1 * k1[i]
            + ER6 * k6[i]
            + ER7 * k7[i]
            + ER8 * k8[i]
            + ER9 * k9[i]
            + ER10 * k10[i]
            + ER11 * k11[i]
            + ER12 * k12[i];
        err += (e8 / sk).powi(2);
    }
    let mut deno = err + 0.01 * err2;
    if deno <= 0.0 {
        deno = 1.0;
    }
    let mut err = h.abs() * err * (1.0 / (6.0 * deno)).sqrt();
    if !err.is_finite() || !y_new.iter().all(|v| v.is_finite()) {
        err = f64::INFINITY;
    }

    Trial {
        h,
        y_new,
        err,
        k: [*k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12],
    }
}

/// Step-size controller constants.
const SAFE: f64 = 0.9;
const FAC1: f64 = 0.333;
const FAC2: f64 = 6.0;

/// Proposed next step after an accepted trial.
pub(crate) fn next_step_after_accept(trial: &Trial) -> f64 {
    let fac11 = trial.err.powf(0.125);
    let fac = (1.0 / FAC2).max((1.0 / FAC1).min(fac11 / SAFE));
    trial.h / fac
}

/// Retry step after a rejected trial.
pub(crate) fn next_step_after_reject(trial: &Trial) -> f64 {
    if !trial.err.is_finite() {
        return trial.h * 0.25;
    }
    let fac11 = trial.err.powf(0.125);
    trial.h / (1.0 / FAC1).min(fac11 / SAFE)
}

/// Initial step guess (Hairer's `hinit`).
pub(crate) fn initial_step<F: Fn(&State6) -> State6>(
    f: &F,
    y: &State6,
    k1: &State6,
    tol: &Tolerances,
    h_max: f64,
) -> f64 {
    let sk: Vec<f64> = y.iter().map(|v| tol.atol + tol.rtol * v.abs()).collect();
    let dnf: f64 = k1.iter().zip(&sk).map(|(k, s)| (k / s).powi(2)).sum();
    let dny: f64 = y.iter().zip(&sk).map(|(v, s)| (v / s).powi(2)).sum();
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(h_max);
    let k2 = f(&combine(y, h, &[(1.0, k1)]));
    let der2 = k2
        .iter()
        .zip(k1)
        .zip(&sk)
        .map(|((a, b), s)| ((a - b) / s).powi(2))
        .sum::<f64>()
        .sqrt()
        / h;
    let der12 = der2.abs().max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(1.0 / 8.0)
    };
    (100.0 * h).min(h1).min(h_max)
}

/// Continuous extension over an accepted step `[t0, t0 + h]`.
pub(crate) struct Dense {
    t0: f64,
    h: f64,
    cont: [State6; 8],
}

impl Dense {
    /// Builds the interpolant; costs three extra evaluations of `f`.
    /// `k_new` is f(y_new).
    pub fn new<F: Fn(&State6) -> State6>(f: &F, t0: f64, y0: &State6, trial: &Trial, k_new: &State6) -> Self {
        let h = trial.h;
        let [k1, _k2, _k3, _k4, _k5, k6, k7, k8, k9, k10, k11, k12] = &trial.k;
        let k13 = k_new;
        let mut cont = [[0.0; 6]; 8];
        for i in 0..6 {
            let ydiff = trial.y_new[i] - y0[i];
            let bspl = h * k1[i] - ydiff;
            cont[0][i] = y0[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k13[i] - bspl;
        }
        let mut c5 = weighted(&[
            (D41, k1),
            (D46, k6),
            (D47, k7),
            (D48, k8),
            (D49, k9),
            (D410, k10),
            (D411, k11),
            (D412, k12),
        ]);
        let mut c6 = weighted(&[
            (D51, k1),
            (D56, k6),
            (D57, k7),
            (D58, k8),
            (D59, k9),
            (D510, k10),
            (D511, k11),
            (D512, k12),
        ]);
        let mut c7 = weighted(&[
            (D61, k1),
            (D66, k6),
            (D67, k7),
            (D68, k8),
            (D69, k9),
            (D610, k10),
            (D611, k11),
            (D612, k12),
        ]);
        let mut c8 = weighted(&[
            (D71, k1),
            (D76, k6),
            (D77, k7),
            (D78, k8),
            (D79, k9),
            (D710, k10),
            (D711, k11),
            (D712, k12),
        ]);

        let k14 = f(&combine(
            y0,
            h,
            &[
                (A141, k1),
                (A147, k7),
                (A148, k8),
                (A149, k9),
                (A1410, k10),
                (A1411, k11),
                (A1412, k12),
                (A1413, k13),
            ],
        ));
        let k15 = f(&combine(
            y0,
            h,
            &[
                (A151, k1),
                (A156, k6),
                (A157, k7),
                (A158, k8),
                (A1511, k11),
                (A1512, k12),
                (A1513, k13),
                (A1514, &k14),
            ],
        ));
        let k16 = f(&combine(
            y0,
            h,
            &[
                (A161, k1),
                (A166, k6),
                (A167, k7),
                (A168, k8),
                (A169, k9),
                (A1613, k13),
                (A1614, &k14),
                (A1615, &k15),
            ],
        ));
        for i in 0..6 {
            c5[i] = h * (c5[i] + D413 * k13[i] + D414 * k14[i] + D415 * k15[i] + D416 * k16[i]);
            c6[i] = h * (c6[i] + D513 * k13[i] + D514 * k14[i] + D515 * k15[i] + D516 * k16[i]);
            c7[i] = h * (c7[i] + D613 * k13[i] + D614 * k14[i] + D615 * k15[i] + D616 * k16[i]);
            c8[i] = h * (c8[i] + D713 * k13[i] + D714 * k14[i] + D715 * k15[i] + D716 * k16[i]);
        }
        cont[4] = c5;
        cont[5] = c6;
        cont[6] = c7;
        cont[7] = c8;
        Self { t0, h, cont }
    }

    pub fn eval(&self, t: f64) -> State6 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        let mut y = [0.0; 6];
        for (i, yi) in y.iter_mut().enumerate() {
            let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            *yi = c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s;
        }
        y
    }
}

/// Cubic Hermite interpolant from the step endpoints; free to evaluate,
/// used only to screen for events inside a step.
pub(crate) fn hermite(y0: &State6, f0: &State6, y1: &State6, f1: &State6, h: f64, s: f64) -> State6 {
    let h00 = (1.0 + 2.0 * s) * (1.0 - s).powi(2);
    let h10 = s * (1.0 - s).powi(2);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    let mut out = [0.0; 6];
    for i in 0..6 {
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    }
    out
}

// Coefficients of the DOP853 tableau, dense output and error estimators.
const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;
const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;
const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;
const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;
const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;
const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;
const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;
const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;
