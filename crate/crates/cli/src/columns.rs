//! Output columns of every subcommand, with the descriptions shown in `--help`.

pub type Columns = &'static [(&'static str, &'static str)];

pub const DICKMAN_RHO: Columns = &[("u", "argument"), ("rho", "Dickman function rho(u)")];

pub const DICKMAN_RHO_HAT: Columns = &[
    ("x", "point on the imaginary axis, s = ix"),
    ("re_rho_hat", "real part of the Laplace transform rho_hat(ix)"),
    ("im_rho_hat", "imaginary part of rho_hat(ix)"),
    ("re_log_rho_hat", "real part of log rho_hat(ix), continuous from x = 0"),
    ("im_log_rho_hat", "imaginary part of log rho_hat(ix), continuous from x = 0"),
];

pub const ZETA: Columns = &[
    ("tau", "imaginary part of s = sigma + i tau"),
    ("re_zeta", "real part of zeta(s) (NaN at the pole s = 1)"),
    ("im_zeta", "imaginary part of zeta(s) (NaN at the pole s = 1)"),
    ("re_regular", "real part of (s-1) zeta(s)"),
    ("im_regular", "imaginary part of (s-1) zeta(s)"),
    ("error_estimate", "estimated absolute error of zeta(s)"),
];

pub const PRODUCTS: Columns = &[
    ("N", "prime bound"),
    ("tau", "imaginary part of s = sigma + i tau"),
    ("re_g", "real part of g_{alpha,k,N}(s)"),
    ("im_g", "imaginary part of g_{alpha,k,N}(s)"),
    ("re_zeta_n_alpha", "real part of zeta_N(s)^alpha (factorwise principal power)"),
    ("im_zeta_n_alpha", "imaginary part of zeta_N(s)^alpha"),
    ("re_h", "real part of h_{alpha,k,N}(s)"),
    ("im_h", "imaginary part of h_{alpha,k,N}(s)"),
];

pub const BRUTE: Columns = &[
    ("N", "prime bound"),
    ("re_value", "real part of the enumerated sum"),
    ("im_value", "imaginary part of the enumerated sum"),
    ("terms_used", "number of integers enumerated"),
    ("u_cutoff", "enumeration limit in u = log n / log N"),
    ("tail_certificate", "bound on the omitted terms: sup_{u > u_cutoff}|f| times the full weight"),
    ("rankin_tail", "sharper Rankin-shift bound on the omitted terms"),
];

pub const EXACT: Columns = &[
    ("N", "prime bound"),
    ("re_value", "real part of the Fourier integral (equals the sum)"),
    ("im_value", "imaginary part of the Fourier integral"),
    ("quad_error", "quadrature error estimate"),
    ("tail_bound", "bound on the integral beyond the transform cutoff"),
    ("node_count", "integrand evaluations"),
];

pub const CFACTOR: Columns = &[
    ("N", "prime bound"),
    ("re_C_f", "real part of the main-term constant C_f(alpha,k;N)"),
    ("im_C_f", "imaginary part of C_f(alpha,k;N)"),
    ("quad_error", "quadrature error estimate"),
    ("tail_bound", "bound on the error from truncating the infinite product h"),
    ("node_count", "integrand evaluations"),
];

pub const THEOREM2: Columns = &[
    ("N", "prime bound"),
    ("re_S", "real part of the sum S (Fourier integral)"),
    ("im_S", "imaginary part of S"),
    ("re_C_f", "real part of C_f(alpha,k;N)"),
    ("im_C_f", "imaginary part of C_f(alpha,k;N)"),
    ("abs_E_measured", "|S / (C_f (log N)^alpha) - 1|"),
    ("predicted_envelope", "(log N)^(1-eta), times (log log N)^(2 Re alpha/3) when Re alpha >= 0"),
];

pub const TENENBAUM: Columns = &[
    ("N", "prime bound"),
    ("max_rel_error", "max over the tau grid of |zeta_N(s) / (zeta(s)(s-1) log N rho_hat((s-1) log N)) - 1|, s = 1 + i tau"),
    ("tau_at_max", "grid point attaining the maximum"),
    ("error_at_zero", "the same relative error at tau = 0"),
    ("L_epsilon", "exp((log N)^(3/5 - epsilon))"),
];

pub const LEMMA1: Columns = &[
    ("N", "prime bound"),
    ("max_rel_error", "max over the tau grid of |h_{alpha,k,N}(1+i tau) / h_{alpha,k}(1+i tau) - 1|"),
    ("decay_ratio", "previous row's error divided by this row's (empty on the first row)"),
];

pub const ERRORDECOMP: Columns = &[
    ("N", "prime bound"),
    ("re_I2", "real part of the Fourier integral over |x| > 3 log N"),
    ("im_I2", "imaginary part of that integral"),
    ("I2_error", "quadrature error plus transform-tail bound for I2"),
    ("I2_shape", "(log N)^(1-eta), times (log log N)^(2 Re alpha/3) when Re alpha >= 0"),
    ("I2_ratio", "|I2| / I2_shape"),
    ("re_E2", "real part of (log N)^alpha times the main-term integral of f_hat A^alpha rho_hat^alpha (h_N - h)"),
    ("im_E2", "imaginary part of E2"),
    ("E2_error", "error estimate of E2"),
    ("E2_shape", "(log N)^(Re alpha - 1) / N"),
    ("E2_ratio", "|E2| / E2_shape"),
];

/// `verify-all` writes one table per criterion; their columns are listed by name.
pub const VERIFY_HELP: &str = "\
Output: one section per acceptance table, each headed `## <table name>` and
followed by its CSV header and rows. Tables and their columns:
  oracle_equivalence: alpha_re, alpha_im, k, N, exact_re, exact_im, brute_re,
    brute_im, abs_diff, quad_error, tail_bound, tail_certificate, terms, pass
  product_identity: alpha_re, alpha_im, k, N, tau, residual, pass
  enumeration_vs_product: alpha_re, alpha_im, k, N, terms, brute_re, brute_im,
    product_re, product_im, rel_error, pass
  golden_values: quantity, computed, reference, error, tolerance, pass
  partial_zeta_trend: N, max_rel_error, tau_at_max, error_at_zero, L_epsilon
  correction_product_trend: alpha_re, alpha_im, k, N, max_rel_error, decay_ratio
  main_term_convergence: alpha_re, alpha_im, k, N, S_re, S_im, C_f_re, C_f_im,
    abs_E_measured, predicted_envelope
  alpha_zero_enumeration: k, N, value_re, value_im, f0, exact_match
  alpha_zero_main_term: N, S_re, C_f_re, abs_E_measured, pass
  zeta_bound: t, abs_zeta, bound, holds
  branch_robustness: alpha, N, C_f_re, C_f_im, direct_diff, quad_error,
    doubled_shift, nodes, doubled_nodes, pass
  determinism: run, threads, bytes, identical_to_first
(_re/_im: real and imaginary parts; pass/holds: per-row verdicts.)
A PASS/FAIL line per criterion is printed to stderr.";

pub fn help_text(cols: &[Columns]) -> String {
    let mut out = String::from("Output columns:\n");
    for set in cols {
        for (name, doc) in set.iter() {
            out.push_str(&format!("  {name:<20} {doc}\n"));
        }
    }
    out.push_str("Reals are written with 17 significant digits.");
    out
}

pub fn names(cols: Columns) -> Vec<&'static str> {
    cols.iter().map(|(n, _)| *n).collect()
}
