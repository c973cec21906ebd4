package test.nop;

public class ClassA extends Polymorphism {
    public void draw() {
    }

    public void color() {
    }
}
