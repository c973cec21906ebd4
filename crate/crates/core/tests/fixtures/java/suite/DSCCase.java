package test.suite;

public class DSCCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
