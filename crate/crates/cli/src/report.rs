use std::fmt::Write;

use dquint::intersect::{CaseReport, PipelineReport};

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Markdown rendering of a full pipeline run.
pub fn markdown(r: &PipelineReport) -> String {
    let mut s = String::new();
    let c = &r.chain;
    let _ = writeln!(s, "# Non-extensibility of {{1, 3}} in Z[√−2]\n");
    let _ = writeln!(s, "Complete: **{}**\n", yes(r.complete));
    let _ = writeln!(s, "Conclusion: {}\n", r.conclusion);
    let _ = writeln!(
        s,
        "Precision {} bits, index bound {}.\n",
        r.options.precision, r.options.index_bound
    );

    let _ = writeln!(s, "## Bennett chain (k = {})\n", c.k_probe);
    let _ = writeln!(s, "| quantity | value |");
    let _ = writeln!(s, "|---|---|");
    let _ = writeln!(s, "| γ | {} |", c.gamma);
    let _ = writeln!(s, "| λ | {} |", c.lambda.certified_decimal(12));
    let _ = writeln!(s, "| λ < 2 | {} |", yes(c.lambda_below_two));
    let _ = writeln!(s, "| coefficient | {} (exact {}) |", c.coefficient, c.coefficient_exact);
    let _ = writeln!(s, "| ratio | {} (exact {}) |", c.ratio, c.ratio_exact);
    let _ = writeln!(s, "| growth | {} |", c.growth);
    let _ = writeln!(s, "| (−d_k)^(1/4) bound | {} |", c.quartic_root_bound.certified_decimal(6));
    let _ = writeln!(s, "| −d_k bound | {} |", c.dk_bound);
    let _ = writeln!(s, "| kMax | {} |\n", c.k_max);
    for st in &c.steps {
        let _ = writeln!(s, "- [{}] {}: {}", if st.holds { "x" } else { " " }, st.label, st.detail);
    }
    s.push('\n');

    let _ = writeln!(s, "## Small-index elimination\n");
    let _ = writeln!(s, "| k | cases | eliminated | by size argument | survivors |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for e in &r.sieve {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            e.k,
            e.cases,
            e.eliminated,
            e.by_proof_route,
            e.survivors.len()
        );
    }
    s.push('\n');

    let _ = writeln!(s, "## Small cases\n");
    for case in &r.cases {
        case_section(&mut s, case);
    }

    let _ = writeln!(s, "## Extensions for every k\n");
    let _ = writeln!(s, "| k | z0 | d_{{k−1}} | z1 | d_{{k+1}} | ok |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for u in &r.universal {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            u.k,
            u.z0,
            u.d_prev,
            u.z1,
            u.d_next,
            yes(u.ok())
        );
    }
    s.push('\n');

    let t = &r.text_instance;
    let _ = writeln!(s, "## Linear form for k = 1 as set up by hand\n");
    let _ = writeln!(s, "- C = {}", t.bw.c.certified_decimal(3));
    let _ = writeln!(s, "- M0 = {}, rounded to {}", t.index_bound.m0, t.index_bound.rounded);
    let _ = writeln!(s, "- reduction: {}", trajectory(&t.reduction.trajectory));
    s
}

fn trajectory(t: &[num_bigint::BigInt]) -> String {
    t.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" → ")
}

fn case_section(s: &mut String, case: &CaseReport) {
    let r = &case.result;
    let eq = &r.equation;
    let _ = writeln!(s, "### k = {} (d_k = {})\n", r.k, r.d);
    let _ = writeln!(
        s,
        "Equation: z² − {}·{}² = {}{}, unit {} + {}√{}.\n",
        eq.d,
        r.form.letter(),
        eq.n,
        if eq.weight == 1.into() {
            String::new()
        } else {
            format!(" (z scaled by {})", eq.weight)
        },
        r.unit.u,
        r.unit.v,
        eq.d
    );
    for h in &r.hits {
        let _ = writeln!(s, "- {}", h.label());
    }
    let ext: Vec<_> = r.extensions.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(
        s,
        "\nExtensions d ∈ {{{}}}; expected d_{{k±1}}: {}; tuples valid: {}.\n",
        ext.join(", "),
        yes(r.matches),
        yes(r.tuples_valid)
    );
    let _ = writeln!(s, "| class | C | M0 | reduction | final |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for c in &case.certificates {
        let _ = writeln!(
            s,
            "| ({}, {}) | {} | {} | {} | {} |",
            c.class.z0,
            c.class.x0,
            c.bw.c.certified_decimal(0),
            c.index_bound.m0,
            trajectory(&c.reduction.trajectory),
            c.final_bound
        );
    }
    let _ = writeln!(s, "\nCertified: {}.\n", yes(case.certified()));
}
