use snacs_hi::hierarchy::{ConstrualLabel, Hierarchy};

fn print_tree(h: &Hierarchy, name: &str) {
    let node = h.get(name).unwrap();
    println!("{}{}", "  ".repeat(node.depth), node.name);
    for child in h.children(name) {
        print_tree(h, &child.name);
    }
}

fn main() {
    let h = Hierarchy::builtin();
    for root in h.roots() {
        println!("# {:?}", root.group);
        print_tree(&h, &root.name);
    }

    for (a, b) in [("Source", "Goal"), ("StartTime", "EndTime"), ("Possessor", "Whole")] {
        println!("lca({a}, {b}) = {}", h.lca(a, b).unwrap().name);
    }
    println!("Locus subsumes Goal: {}", h.subsumes("Locus", "Goal").unwrap());

    let c: ConstrualLabel = "Recipient↝Agent".parse().unwrap();
    println!("{c}: scene {}, function {}, congruent {}", c.scene, c.function, c.is_congruent());
    println!("{}", ConstrualLabel::congruent("Topic"));
}
