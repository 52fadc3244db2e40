use gomea_trap::algorithms::{
    cross_with_mask, gom, gom_with, gomea_run, mu_plus_one_dc_ga_run, one_plus_one_ea_run,
    random_genome, Evaluator, GaConfig, GomStep, GomeaConfig, MixingSource, Population,
    RandomMixing,
};
use gomea_trap::problems::{count_optimal_blocks, Problem};
use gomea_trap::{
    truthful_mp_fos, BitString, Fos, ProblemInstance, RandomStream, Shape, TrapParams,
};
use proptest::prelude::*;

/// Mixing continues past the optimum.
struct NoStop<'a>(&'a ProblemInstance);

impl Problem for NoStop<'_> {
    fn genome_len(&self) -> usize {
        self.0.genome_len()
    }
    fn fitness(&self, x: &BitString) -> f64 {
        self.0.fitness(x)
    }
    fn is_optimal(&self, _: &BitString) -> bool {
        false
    }
}

fn instance() -> impl Strategy<Value = ProblemInstance> {
    (1usize..=8, 2usize..=6, 0usize..3, any::<u64>()).prop_map(|(m, k, which, seed)| {
        if which == 0 {
            return ProblemInstance::standard(m, k).unwrap();
        }
        let mut rng = RandomStream::new(seed);
        let z = 1 + rng.draw_index(k - 1).unwrap();
        let b = 1.0 + rng.draw_index(8).unwrap() as f64;
        let a = b * (1 + rng.draw_index(9).unwrap()) as f64 / 10.0;
        let shape = if which == 1 {
            Shape::Generalized
        } else {
            Shape::Tailed
        };
        ProblemInstance::new(m, TrapParams::new(k, a, b, z).unwrap(), shape).unwrap()
    })
}

struct Recorder<'r> {
    inner: RandomMixing<'r>,
    steps: Vec<GomStep>,
}

impl MixingSource for Recorder<'_> {
    fn traversal(&mut self, n: usize) -> Vec<usize> {
        self.inner.traversal(n)
    }
    fn donor(&mut self, pop_len: usize, receiver: usize) -> usize {
        self.inner.donor(pop_len, receiver)
    }
    fn mutate(&mut self, offspring: &mut BitString, mask: &[usize]) {
        self.inner.mutate(offspring, mask)
    }
    fn observe(&mut self, step: &GomStep) {
        self.steps.push(step.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gom_uses_one_evaluation_per_subset(inst in instance(), mu in 2usize..12, seed in any::<u64>()) {
        let mut rng = RandomStream::new(seed);
        let fos = truthful_mp_fos(inst.m(), inst.k()).unwrap();
        let problem = NoStop(&inst);
        let mut eval = Evaluator::unlimited(&problem);
        let genomes = (0..mu).map(|_| random_genome(inst.len(), &mut rng)).collect();
        let pop = Population::evaluate(genomes, &mut eval).unwrap();
        let before = eval.count();
        let slot = rng.draw_index(mu).unwrap();
        let out = gom(slot, &pop, &fos, &mut eval, &mut rng, Some(0.2)).unwrap();
        prop_assert_eq!(eval.count() - before, fos.len() as u64);
        prop_assert_eq!(out.fitness, inst.fitness(&out.genome));
        prop_assert!(out.fitness >= pop.get(slot).fitness);
    }

    #[test]
    fn gom_with_mutation_keeps_optimal_blocks_on_standard_trap(
        m in 1usize..=8, k in 2usize..=6, mu in 2usize..12, seed in any::<u64>()
    ) {
        let inst = ProblemInstance::standard(m, k).unwrap();
        let mut rng = RandomStream::new(seed);
        let fos = truthful_mp_fos(m, k).unwrap();
        let problem = NoStop(&inst);
        let mut eval = Evaluator::unlimited(&problem);
        let genomes = (0..mu).map(|_| random_genome(inst.len(), &mut rng)).collect();
        let mut pop = Population::evaluate(genomes, &mut eval).unwrap();
        for _ in 0..3 * mu {
            let slot = rng.draw_index(mu).unwrap();
            let mut current = pop.get(slot).genome.clone();
            let mut src = Recorder {
                inner: RandomMixing::new(&mut rng, Some(1.0 / k as f64)).unwrap(),
                steps: Vec::new(),
            };
            let out = gom_with(slot, &pop, &fos, &mut eval, &mut src).unwrap();
            for step in src.steps.iter().filter(|s| s.accepted) {
                let before = inst.region_membership(&current).unwrap();
                let after = inst.region_membership(&step.offspring).unwrap();
                for (b, a) in before.iter().zip(&after) {
                    prop_assert!(!b || *a);
                }
                current = step.offspring.clone();
            }
            prop_assert_eq!(&current, &out.genome);
            pop.replace(slot, out);
        }
    }

    #[test]
    fn cross_with_mask_only_touches_the_mask(
        len in 1usize..80, seed in any::<u64>(), density in 0.0f64..1.0
    ) {
        let mut rng = RandomStream::new(seed);
        let r = random_genome(len, &mut rng);
        let d = random_genome(len, &mut rng);
        let mask = rng.bernoulli_positions(len, density).unwrap();
        let out = cross_with_mask(&r, &d, &mask).unwrap();
        for i in 0..len {
            let want = if mask.contains(&i) { d.get(i) } else { r.get(i) };
            prop_assert_eq!(out.get(i), want);
        }
    }

    #[test]
    fn runners_repeat_exactly(seed in any::<u64>()) {
        let inst = ProblemInstance::standard(3, 3).unwrap();
        let fos = truthful_mp_fos(3, 3).unwrap();
        let run_all = || {
            let mut rng = RandomStream::new(seed);
            let init: Vec<BitString> = (0..12).map(|_| random_genome(9, &mut rng)).collect();
            let g = gomea_run(&inst, &fos, init.clone(), &GomeaConfig { budget: 500, mutation_rate: Some(1.0 / 3.0) }, &mut rng).unwrap();
            let ga = mu_plus_one_dc_ga_run(&inst, init, &GaConfig { budget: 500, mutation_rate: 0.0 }, &mut rng).unwrap();
            let ea = one_plus_one_ea_run(&inst, 1.0 / 9.0, 500, &mut rng).unwrap();
            (g, ga, ea)
        };
        prop_assert_eq!(run_all(), run_all());
    }

    #[test]
    fn gomea_evaluations_are_mu_plus_whole_gom_calls(seed in any::<u64>(), mu in 2usize..20) {
        let inst = ProblemInstance::standard(4, 5).unwrap();
        let fos = truthful_mp_fos(4, 5).unwrap();
        let mut rng = RandomStream::new(seed);
        let init = vec![BitString::zeros(20); mu];
        let budget = mu as u64 + 4 * 50;
        let out = gomea_run(&inst, &fos, init, &GomeaConfig { budget, mutation_rate: None }, &mut rng).unwrap();
        prop_assert!(!out.hit);
        prop_assert_eq!(out.evaluations_used, budget);
        prop_assert_eq!((out.evaluations_used - mu as u64) % fos.len() as u64, 0);
    }
}

#[test]
fn untruthful_fos_can_lose_an_optimal_block() {
    let inst = ProblemInstance::standard(3, 3).unwrap();
    let fos = Fos::new(vec![vec![0, 1, 2, 3, 4, 5], vec![6, 7, 8]], 9).unwrap();
    let genomes = ["111011011", "000000110", "101111001", "010111000"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let mut eval = Evaluator::unlimited(&inst);
    let pop = Population::evaluate(genomes, &mut eval).unwrap();
    struct Fixed(Vec<usize>);
    impl MixingSource for Fixed {
        fn traversal(&mut self, n: usize) -> Vec<usize> {
            (0..n).collect()
        }
        fn donor(&mut self, _: usize, _: usize) -> usize {
            self.0.remove(0)
        }
    }
    let out = gom_with(0, &pop, &fos, &mut eval, &mut Fixed(vec![1, 3])).unwrap();
    let before = count_optimal_blocks(&pop.get(0).genome, &inst).unwrap();
    let after = count_optimal_blocks(&out.genome, &inst).unwrap();
    assert_eq!((before, after), (1, 0));
    assert!(out.fitness > pop.get(0).fitness);
}
