#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use strandalg::algebra::AlgebraContext;
use strandalg::dsl::{parse_element, parse_spec};
use strandalg::primitives::{enumerate_primitive_cycles, nerve_partition};

const SPEC: &str = "\
quiver fuzz
vertices 1 2 3 4 5
arrows
  a: 1 -> 1
  x: 1 -> 2
  y: 2 -> 1
  w: 2 -> 3
  z: 3 -> 2
  f: 4 -> 3
  b: 4 -> 4
  g: 5 -> 4
  c: 5 -> 5
relations
  a*a
  x*y
  w*x
  y*z
  z*f
  f*b
  b*g
  g*c
  c^3
model char=2 mixed s=p,t L=12 D=12
";

static CTX: OnceLock<AlgebraContext> = OnceLock::new();

fn context() -> &'static AlgebraContext {
    CTX.get_or_init(|| {
        let spec = parse_spec(SPEC).expect("embedded spec parses");
        let pcs = enumerate_primitive_cycles(&spec.quiver, &spec.zset).expect("special");
        let partition = nerve_partition(&spec.quiver, &pcs);
        let (model, len_cap) = spec
            .resolve_model(partition.block_count(), None)
            .expect("model resolves");
        AlgebraContext::new(spec.quiver, model, len_cap)
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Expressions either evaluate or produce a positioned error.
    let _ = parse_element(text, context());
});
