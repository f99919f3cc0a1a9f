//! Paulis as bit vectors, gate conjugation, and the accept/reject split.

use qauth::symplectic::{classify, TagLayout};
use qauth::{Direction, Gate, PauliOp, SymplecticCircuit};

fn main() -> qauth::Result<()> {
    let p: PauliOp = "XIZ".parse().unwrap();
    let q: PauliOp = "ZIZ".parse().unwrap();
    println!("{p} and {q} anticommute: {}", p.sip(&q)?);
    println!("{p} * {q} = {}", p.mul(&q)?);

    let circuit = SymplecticCircuit::new(
        3,
        vec![Gate::H(0), Gate::Cnot { control: 0, target: 1 }, Gate::S(2), Gate::Perm(vec![2, 0, 1])],
    )?;
    for s in ["XII", "ZII", "IIX"] {
        let s: PauliOp = s.parse().unwrap();
        let fwd = circuit.conjugate(&s, Direction::Forward)?;
        let back = circuit.conjugate(&fwd, Direction::Inverse)?;
        println!("{s} -> {fwd} -> {back}");
    }

    // Qubit 0 carries the message, qubits 1 and 2 are tags.
    let layout = TagLayout::leading_message(1, 2);
    for s in ["IIZ", "ZII", "IXI"] {
        let s: PauliOp = s.parse().unwrap();
        println!("{s}: {:?}", classify(&s, &layout)?);
    }
    println!("JSON: {}", serde_json::to_string(&p).unwrap());
    Ok(())
}
